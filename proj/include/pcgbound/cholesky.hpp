#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcgbound/linalg.hpp"

namespace pcgb {

/**
 * @brief Cholesky factor M = L L^T of a symmetric positive definite matrix.
 *
 * L is kept in row envelope storage: row i holds the entries from its first
 * nonzero column up to the diagonal. Fill-in never leaves the envelope, so
 * banded matrices (lexicographically numbered grid operators) factor in
 * O(n b^2) and solve in O(n b).
 */
class CholeskyFactor {
 public:
  CholeskyFactor() = default;

  /// Uses the lower triangle of M. Throws std::runtime_error on a non-positive pivot.
  static CholeskyFactor factor(const SparseMatrix& M);
  static CholeskyFactor factor(const DenseMatrix& M);

  std::size_t dimension() const { return first_.size(); }
  std::size_t stored_entries() const { return data_.size(); }

  Vector solve(std::span<const double> b) const;
  void solve_in_place(std::span<double> x) const;

  /// Dense copy of L (tests and diagnostics).
  DenseMatrix lower() const;

 private:
  template <class Lookup>
  static CholeskyFactor factor_envelope(std::size_t n, std::vector<std::size_t> first, Lookup&& entry);

  double l(std::size_t i, std::size_t j) const { return data_[offset_[i] + (j - first_[i])]; }

  std::vector<std::size_t> first_;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

}  // namespace pcgb
