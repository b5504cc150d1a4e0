#include "pcgbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pcgb {

double dot(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y)
{
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] += a * x[i];
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

Vector DenseMatrix::multiply(std::span<const double> x) const
{
  if (x.size() != cols_)
    throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    y[i] = dot(row(i), x);
  return y;
}

DenseMatrix DenseMatrix::transpose() const
{
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::norm() const { return norm2(data_); }

double DenseMatrix::asymmetry() const
{
  if (rows_ != cols_)
    throw std::invalid_argument("DenseMatrix::asymmetry: matrix is not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  const double scale = norm();
  return scale > 0.0 ? worst / scale : worst;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
  if (a.cols_ != b.rows_)
    throw std::invalid_argument("DenseMatrix product: dimension mismatch");
  DenseMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0)
        continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols_; ++j)
        ci[j] += aik * bk[j];
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values))
{
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size())
    throw std::invalid_argument("SparseMatrix: inconsistent compressed row layout");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1])
      throw std::invalid_argument("SparseMatrix: row offsets must be non-decreasing");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= cols_)
        throw std::invalid_argument("SparseMatrix: column index out of range in row " + std::to_string(i));
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("SparseMatrix: column indices not strictly increasing in row " +
                                    std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
{
  for (const auto& t : entries)
    if (t.row >= rows || t.col >= cols)
      throw std::invalid_argument("SparseMatrix::from_triplets: entry out of range");
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const auto r = entries[k].row;
    const auto c = entries[k].col;
    double v = 0.0;
    // summation order follows input order within equal (row, col): deterministic
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k)
      v += entries[k].value;
    col_idx.push_back(c);
    values.push_back(v);
    ++row_ptr[r + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d)
{
  const std::size_t n = d.size();
  std::vector<std::size_t> row_ptr(n + 1), col_idx(n);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::iota(col_idx.begin(), col_idx.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx), Vector(d.begin(), d.end()));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m, double drop_tol)
{
  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > drop_tol) {
        col_idx.push_back(j);
        values.push_back(m(i, j));
      }
    }
    row_ptr.push_back(col_idx.size());
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const
{
  if (i >= rows_ || j >= cols_)
    throw std::out_of_range("SparseMatrix::at: index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j)
    return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

Vector SparseMatrix::multiply(std::span<const double> x) const
{
  Vector y(rows_);
  multiply(x, y);
  return y;
}

Vector SparseMatrix::multiply_transposed(std::span<const double> x) const
{
  if (x.size() != rows_)
    throw std::invalid_argument("SparseMatrix::multiply_transposed: dimension mismatch");
  Vector y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      y[col_idx_[k]] += values_[k] * x[i];
  return y;
}

SparseMatrix SparseMatrix::transpose() const
{
  std::vector<std::size_t> row_ptr(cols_ + 1, 0);
  for (auto c : col_idx_)
    ++row_ptr[c + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<std::size_t> col_idx(nnz());
  std::vector<double> values(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto dst = next[col_idx_[k]]++;
      col_idx[dst] = i;
      values[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::scaled(double factor) const
{
  auto values = values_;
  for (auto& v : values)
    v *= factor;
  return SparseMatrix(rows_, cols_, row_ptr_, col_idx_, std::move(values));
}

bool SparseMatrix::is_symmetric(double rel_tol) const
{
  if (rows_ != cols_)
    return false;
  double scale = 0.0;
  for (auto v : values_)
    scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (std::abs(values_[k] - at(col_idx_[k], i)) > rel_tol * scale)
        return false;
  return true;
}

DenseMatrix SparseMatrix::to_dense() const
{
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      d(i, col_idx_[k]) = values_[k];
  return d;
}

DenseMatrix SparseMatrix::extract(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const
{
  DenseMatrix d(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = rows[r];
    auto c = cols.begin();
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1] && c != cols.end(); ++k) {
      c = std::lower_bound(c, cols.end(), col_idx_[k]);
      if (c != cols.end() && *c == col_idx_[k])
        d(r, static_cast<std::size_t>(c - cols.begin())) = values_[k];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::principal_submatrix(std::span<const std::size_t> idx) const
{
  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values;
  for (auto i : idx) {
    auto c = idx.begin();
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1] && c != idx.end(); ++k) {
      c = std::lower_bound(c, idx.end(), col_idx_[k]);
      if (c != idx.end() && *c == col_idx_[k]) {
        col_idx.push_back(static_cast<std::size_t>(c - idx.begin()));
        values.push_back(values_[k]);
      }
    }
    row_ptr.push_back(col_idx.size());
  }
  return SparseMatrix(idx.size(), idx.size(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

Vector spmv(const SparseMatrix& A, std::span<const double> x)
{
  if (x.size() != A.cols())
    throw std::invalid_argument("spmv: vector length " + std::to_string(x.size()) +
                                " does not match matrix columns " + std::to_string(A.cols()));
  return A.multiply(x);
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b)
{
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: dimension mismatch");
  const auto ap = a.row_ptr();
  const auto ac = a.col_idx();
  const auto av = a.values();
  const auto bp = b.row_ptr();
  const auto bc = b.col_idx();
  const auto bv = b.values();

  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values;
  std::vector<double> accum(b.cols(), 0.0);
  std::vector<char> used(b.cols(), 0);
  std::vector<std::size_t> pattern;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    pattern.clear();
    for (std::size_t k = ap[i]; k < ap[i + 1]; ++k) {
      const auto r = ac[k];
      for (std::size_t l = bp[r]; l < bp[r + 1]; ++l) {
        const auto c = bc[l];
        if (!used[c]) {
          used[c] = 1;
          pattern.push_back(c);
        }
        accum[c] += av[k] * bv[l];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (auto c : pattern) {
      col_idx.push_back(c);
      values.push_back(accum[c]);
      accum[c] = 0.0;
      used[c] = 0;
    }
    row_ptr.push_back(col_idx.size());
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace pcgb
