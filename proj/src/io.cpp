#include "pcgbound/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcgb {

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank_or_comment(const std::string& line)
{
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%' || line[pos] == '#';
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in)
{
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ParseError(1, "empty Matrix Market input");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate")
    throw ParseError(lineno, "expected '%%MatrixMarket matrix coordinate' banner");
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError(lineno, "unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  std::size_t rows = 0, cols = 0, entries = 0;
  bool have_size = false;
  std::vector<Triplet> triplets;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    std::istringstream ls(line);
    if (!have_size) {
      if (!(ls >> rows >> cols >> entries))
        throw ParseError(lineno, "malformed size line");
      have_size = true;
      triplets.reserve(symmetric ? 2 * entries : entries);
      continue;
    }
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v))
      throw ParseError(lineno, "malformed entry");
    if (i == 0 || j == 0 || i > rows || j > cols)
      throw ParseError(lineno, "entry index out of range");
    if (symmetric && j > i)
      throw ParseError(lineno, "symmetric storage must list the lower triangle");
    triplets.push_back({i - 1, j - 1, v});
    if (symmetric && i != j)
      triplets.push_back({j - 1, i - 1, v});
  }
  if (!have_size)
    throw ParseError(lineno, "missing size line");
  const std::size_t stored = symmetric ? static_cast<std::size_t>(std::count_if(
                                             triplets.begin(), triplets.end(),
                                             [](const Triplet& t) { return t.row >= t.col; }))
                                       : triplets.size();
  if (stored != entries)
    throw ParseError(lineno, "expected " + std::to_string(entries) + " entries, found " + std::to_string(stored));
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A, bool symmetric)
{
  if (symmetric && !A.is_symmetric())
    throw std::invalid_argument("write_matrix_market: matrix is not symmetric");
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto va = A.values();
  std::size_t count = 0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k)
      if (!symmetric || ci[k] <= i)
        ++count;
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << A.rows() << ' ' << A.cols() << ' ' << count << '\n';
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k)
      if (!symmetric || ci[k] <= i)
        out << i + 1 << ' ' << ci[k] + 1 << ' ' << format_double(va[k]) << '\n';
}

Vector read_vector(std::istream& in)
{
  Vector v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    std::istringstream ls(line);
    double x = 0.0;
    std::string rest;
    if (!(ls >> x) || (ls >> rest))
      throw ParseError(lineno, "expected exactly one number");
    v.push_back(x);
  }
  return v;
}

void write_vector(std::ostream& out, std::span<const double> v)
{
  for (double x : v)
    out << format_double(x) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pcgb
