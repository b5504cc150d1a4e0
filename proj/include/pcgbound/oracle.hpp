#pragma once

/** @file oracle.hpp
    @brief Exact spectrum of the preconditioned operator M^{-1} A for problems
           small enough to handle densely.
*/

#include <cstddef>

#include "pcgbound/eigen.hpp"
#include "pcgbound/krylov.hpp"
#include "pcgbound/spectrum.hpp"

namespace pcgb {

enum class OracleRoute {
  inverse_sqrt,  ///< M^{-1} = Q L Q^T, K = Q L^{1/2}, eig(K^T A K)
  cholesky,      ///< A = R R^T, eig(R^T M^{-1} R)
};

/// Dense M^{-1} built column by column from the apply operator, symmetrized.
/// Throws std::invalid_argument if the relative asymmetry exceeds @p guard.
DenseMatrix dense_inverse_preconditioner(std::size_t n, const LinearOperator& apply, double guard = 1e-10);

/**
 * Ascending eigenvalues of M^{-1} A. An empty operator means M = I. Refuses with
 * std::length_error when n > cap; throws std::runtime_error if a computed
 * eigenvalue is not positive.
 */
Spectrum preconditioned_spectrum(const SparseMatrix& A, const LinearOperator& apply,
                                 std::size_t cap = default_oracle_cap,
                                 OracleRoute route = OracleRoute::inverse_sqrt);

}  // namespace pcgb
