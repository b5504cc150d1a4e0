#include "pcgbound/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pcgbound/cholesky.hpp"

namespace pcgb {

DenseMatrix dense_inverse_preconditioner(std::size_t n, const LinearOperator& apply, double guard)
{
  DenseMatrix Minv(n, n);
  Vector e(n, 0.0), z(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    if (apply)
      apply(e, z);
    else
      z = e;
    for (std::size_t i = 0; i < n; ++i)
      Minv(i, j) = z[i];
    e[j] = 0.0;
  }
  const double asym = Minv.asymmetry();
  if (asym > guard)
    throw std::invalid_argument("oracle: preconditioner is not symmetric (relative asymmetry " +
                                std::to_string(asym) + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (Minv(i, j) + Minv(j, i));
      Minv(i, j) = avg;
      Minv(j, i) = avg;
    }
  return Minv;
}

namespace {

void symmetrize(DenseMatrix& M)
{
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = i + 1; j < M.cols(); ++j) {
      const double avg = 0.5 * (M(i, j) + M(j, i));
      M(i, j) = avg;
      M(j, i) = avg;
    }
}

// columns of A * B for sparse A and dense B
DenseMatrix sparse_times_dense(const SparseMatrix& A, const DenseMatrix& B)
{
  const std::size_t n = A.rows();
  DenseMatrix out(n, B.cols());
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& va = A.values();
  for (std::size_t i = 0; i < n; ++i) {
    auto orow = out.row(i);
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const auto brow = B.row(ci[k]);
      for (std::size_t j = 0; j < B.cols(); ++j)
        orow[j] += va[k] * brow[j];
    }
  }
  return out;
}

Spectrum positive_spectrum(Vector values)
{
  for (double v : values)
    if (!(v > 0.0))
      throw std::runtime_error("oracle: non-positive eigenvalue " + std::to_string(v) +
                               " (operator or preconditioner not SPD)");
  return Spectrum::from_unsorted(std::move(values));
}

}  // namespace

Spectrum preconditioned_spectrum(const SparseMatrix& A, const LinearOperator& apply, std::size_t cap,
                                 OracleRoute route)
{
  const std::size_t n = A.rows();
  if (A.cols() != n)
    throw std::invalid_argument("oracle: matrix is not square");
  if (n > cap)
    throw std::length_error("oracle: n = " + std::to_string(n) + " exceeds the dense cap " + std::to_string(cap) +
                            "; use Ritz values from a converged PCG run instead");
  if (!apply)
    return positive_spectrum(dense_sym_eigen(A.to_dense(), cap).values);

  const DenseMatrix Minv = dense_inverse_preconditioner(n, apply);
  if (route == OracleRoute::inverse_sqrt) {
    const auto eig = dense_sym_eigen(Minv, cap);
    DenseMatrix K = eig.vectors;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(eig.values[j] > 0.0))
        throw std::runtime_error("oracle: preconditioner has a non-positive eigenvalue");
      const double s = std::sqrt(eig.values[j]);
      for (std::size_t i = 0; i < n; ++i)
        K(i, j) *= s;
    }
    DenseMatrix S = K.transpose() * sparse_times_dense(A, K);
    symmetrize(S);
    return positive_spectrum(dense_sym_eigen(S, cap).values);
  }

  const DenseMatrix R = CholeskyFactor::factor(A).lower();
  DenseMatrix S = R.transpose() * (Minv * R);
  symmetrize(S);
  return positive_spectrum(dense_sym_eigen(S, cap).values);
}

}  // namespace pcgb
