#include "pcgbound/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pcgb {

template <class Lookup>
CholeskyFactor CholeskyFactor::factor_envelope(std::size_t n, std::vector<std::size_t> first, Lookup&& entry)
{
  CholeskyFactor f;
  f.first_ = std::move(first);
  f.offset_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    f.offset_[i + 1] = f.offset_[i] + (i - f.first_[i] + 1);
  f.data_.assign(f.offset_[n], 0.0);

  for (std::size_t i = 0; i < n; ++i)
    entry(i, [&](std::size_t j, double v) { f.data_[f.offset_[i] + (j - f.first_[i])] = v; });

  for (std::size_t i = 0; i < n; ++i) {
    double* li = f.data_.data() + f.offset_[i];
    const std::size_t fi = f.first_[i];
    for (std::size_t j = fi; j <= i; ++j) {
      const double* lj = f.data_.data() + f.offset_[j];
      const std::size_t fj = f.first_[j];
      const std::size_t k0 = std::max(fi, fj);
      double s = li[j - fi];
      for (std::size_t k = k0; k < j; ++k)
        s -= li[k - fi] * lj[k - fj];
      if (j < i) {
        li[j - fi] = s / lj[j - fj];
      } else {
        if (!(s > 0.0))
          throw std::runtime_error("Cholesky: matrix is not positive definite (pivot " + std::to_string(i) +
                                   " = " + std::to_string(s) + ")");
        li[j - fi] = std::sqrt(s);
      }
    }
  }
  return f;
}

CholeskyFactor CholeskyFactor::factor(const SparseMatrix& M)
{
  if (M.rows() != M.cols())
    throw std::invalid_argument("Cholesky: matrix is not square");
  const std::size_t n = M.rows();
  const auto rp = M.row_ptr();
  const auto ci = M.col_idx();
  const auto va = M.values();
  std::vector<std::size_t> first(n);
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = i;
    if (rp[i] < rp[i + 1])
      first[i] = std::min(i, ci[rp[i]]);
  }
  return factor_envelope(n, std::move(first), [&](std::size_t i, auto&& set) {
    for (std::size_t k = rp[i]; k < rp[i + 1] && ci[k] <= i; ++k)
      set(ci[k], va[k]);
  });
}

CholeskyFactor CholeskyFactor::factor(const DenseMatrix& M)
{
  if (M.rows() != M.cols())
    throw std::invalid_argument("Cholesky: matrix is not square");
  const std::size_t n = M.rows();
  std::vector<std::size_t> first(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    while (j < i && M(i, j) == 0.0)
      ++j;
    first[i] = j;
  }
  return factor_envelope(n, std::move(first), [&](std::size_t i, auto&& set) {
    for (std::size_t j = first[i]; j <= i; ++j)
      set(j, M(i, j));
  });
}

void CholeskyFactor::solve_in_place(std::span<double> x) const
{
  const std::size_t n = dimension();
  if (x.size() != n)
    throw std::invalid_argument("Cholesky solve: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = data_.data() + offset_[i];
    const std::size_t fi = first_[i];
    double s = x[i];
    for (std::size_t k = fi; k < i; ++k)
      s -= li[k - fi] * x[k];
    x[i] = s / li[i - fi];
  }
  for (std::size_t i = n; i-- > 0;) {
    const double* li = data_.data() + offset_[i];
    const std::size_t fi = first_[i];
    x[i] /= li[i - fi];
    const double xi = x[i];
    for (std::size_t k = fi; k < i; ++k)
      x[k] -= li[k - fi] * xi;
  }
}

Vector CholeskyFactor::solve(std::span<const double> b) const
{
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

DenseMatrix CholeskyFactor::lower() const
{
  const std::size_t n = dimension();
  DenseMatrix L(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = first_[i]; j <= i; ++j)
      L(i, j) = l(i, j);
  return L;
}

}  // namespace pcgb
