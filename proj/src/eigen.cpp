#include "pcgbound/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pcgb {

SymTridiagonal::SymTridiagonal(Vector diag, Vector offdiag) : diag_(std::move(diag)), offdiag_(std::move(offdiag))
{
  if (diag_.empty() ? !offdiag_.empty() : offdiag_.size() + 1 != diag_.size())
    throw std::invalid_argument("SymTridiagonal: off-diagonal length must be diagonal length - 1");
}

DenseMatrix SymTridiagonal::to_dense() const
{
  DenseMatrix m(size(), size());
  for (std::size_t i = 0; i < size(); ++i) {
    m(i, i) = diag_[i];
    if (i + 1 < size())
      m(i, i + 1) = m(i + 1, i) = offdiag_[i];
  }
  return m;
}

namespace {

// Implicit QL on (d, e) where e[i] couples rows i and i+1 and e[n-1] = 0.
// When zt is given, its rows are rotated along (row i holds eigenvector i).
// Derived from the EISPACK tql1/tql2 procedures.
void ql_implicit(Vector& d, Vector& e, DenseMatrix* zt)
{
  const std::size_t n = d.size();
  if (n == 0)
    return;
  const std::size_t max_sweeps = 50 * n;
  std::size_t sweeps = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1)
      ++m;

    if (m > l) {
      do {
        if (++sweeps > max_sweeps)
          throw std::runtime_error("tridiagonal QL: no convergence after " + std::to_string(max_sweeps) +
                                   " sweeps");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0)
          r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i)
          d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (zt) {
            auto zi = zt->row(i);
            auto zi1 = zt->row(i + 1);
            for (std::size_t k = 0; k < zi.size(); ++k) {
              const double t = zi1[k];
              zi1[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Householder tridiagonalization (EISPACK tred2). On return V holds Q with
// M = Q T Q^T, d the diagonal and e[i] = T(i, i-1) for i >= 1.
void tred2(DenseMatrix& V, Vector& d, Vector& e)
{
  const std::size_t n = V.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0)
    return;
  for (std::size_t j = 0; j < n; ++j)
    d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k)
      scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0)
        g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j)
        e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k + 1 <= i; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j)
        e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k + 1 <= i; ++k)
          V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k)
        d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k)
          g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k)
          V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k)
      V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

void check_symmetric(const DenseMatrix& M)
{
  if (M.rows() != M.cols())
    throw std::invalid_argument("symmetric eigensolver: matrix is not square");
  if (M.asymmetry() > 1e-10)
    throw std::invalid_argument("symmetric eigensolver: matrix is not symmetric");
}

}  // namespace

Vector tridiag_eigenvalues(const SymTridiagonal& T)
{
  if (T.size() == 0)
    throw std::invalid_argument("tridiag_eigenvalues: empty matrix");
  Vector d = T.diag();
  Vector e = T.offdiag();
  e.push_back(0.0);
  ql_implicit(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

SymTridiagonal householder_tridiagonalize(const DenseMatrix& M)
{
  check_symmetric(M);
  DenseMatrix V = M;
  Vector d, e;
  tred2(V, d, e);
  Vector off(e.begin() + (e.empty() ? 0 : 1), e.end());
  return SymTridiagonal(std::move(d), std::move(off));
}

SymmetricEigen dense_sym_eigen(const DenseMatrix& M, std::size_t cap)
{
  if (M.rows() > cap)
    throw std::length_error("dense_sym_eigen: dimension " + std::to_string(M.rows()) + " exceeds oracle cap " +
                            std::to_string(cap));
  check_symmetric(M);
  const std::size_t n = M.rows();
  DenseMatrix V = M;
  Vector d, e;
  tred2(V, d, e);
  // shift to e[i] = T(i, i+1)
  for (std::size_t i = 1; i < n; ++i)
    e[i - 1] = e[i];
  if (n > 0)
    e[n - 1] = 0.0;

  DenseMatrix zt = V.transpose();
  ql_implicit(d, e, &zt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SymmetricEigen out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    const auto src = zt.row(order[j]);
    for (std::size_t k = 0; k < n; ++k)
      out.vectors(k, j) = src[k];
  }
  return out;
}

}  // namespace pcgb
