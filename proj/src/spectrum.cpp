#include "pcgbound/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pcgbound/io.hpp"

namespace pcgb {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values))
{
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw std::invalid_argument("Spectrum: eigenvalue " + std::to_string(i) + " is not positive and finite");
    if (i > 0 && values_[i] < values_[i - 1])
      throw std::invalid_argument("Spectrum: values not ascending at index " + std::to_string(i));
  }
}

Spectrum Spectrum::from_unsorted(std::vector<double> values)
{
  std::sort(values.begin(), values.end());
  return Spectrum(std::move(values));
}

Spectrum Spectrum::slice(std::size_t first, std::size_t last) const
{
  if (first > last || last > values_.size())
    throw std::out_of_range("Spectrum::slice: bad range");
  return Spectrum(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                      values_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Spectrum read_spectrum(std::istream& in)
{
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#')
      continue;
    std::istringstream ls(line);
    double v = 0.0;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw ParseError(lineno, "expected exactly one number");
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParseError(lineno, "eigenvalue must be positive and finite");
    if (!values.empty() && v < values.back())
      throw ParseError(lineno, "values must be ascending");
    values.push_back(v);
  }
  return Spectrum(std::move(values));
}

Spectrum read_spectrum(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return read_spectrum(in);
}

void write_spectrum(std::ostream& out, const Spectrum& spectrum) { write_vector(out, spectrum.values()); }

}  // namespace pcgb
