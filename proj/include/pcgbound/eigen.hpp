#pragma once

/** @file eigen.hpp
    @brief Symmetric eigensolvers: implicit-shift QL for tridiagonal matrices and a
           dense Householder + QL driver used as the exact-spectrum oracle.
*/

#include <cstddef>
#include <vector>

#include "pcgbound/linalg.hpp"

namespace pcgb {

/// Symmetric tridiagonal matrix given by its diagonal and first off-diagonal.
class SymTridiagonal {
 public:
  SymTridiagonal() = default;
  /// Throws std::invalid_argument unless offdiag.size() + 1 == diag.size().
  SymTridiagonal(Vector diag, Vector offdiag);

  std::size_t size() const { return diag_.size(); }
  const Vector& diag() const { return diag_; }
  const Vector& offdiag() const { return offdiag_; }

  DenseMatrix to_dense() const;

 private:
  Vector diag_;
  Vector offdiag_;
};

/// All eigenvalues in ascending order. Implicit QL with Wilkinson-type shifts;
/// throws std::runtime_error if 50*m sweeps do not converge.
Vector tridiag_eigenvalues(const SymTridiagonal& T);

/// Householder reduction M = Q T Q^T (Q discarded).
SymTridiagonal householder_tridiagonalize(const DenseMatrix& M);

inline constexpr std::size_t default_oracle_cap = 2500;

struct SymmetricEigen {
  Vector values;        ///< ascending
  DenseMatrix vectors;  ///< column j belongs to values[j]
};

/// Full eigendecomposition of a dense symmetric matrix. Refuses (std::length_error)
/// when M is larger than @p cap and (std::invalid_argument) when M is not symmetric.
SymmetricEigen dense_sym_eigen(const DenseMatrix& M, std::size_t cap = default_oracle_cap);

}  // namespace pcgb
