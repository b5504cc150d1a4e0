#pragma once

/** @file linalg.hpp
    @brief Compressed-row sparse matrices, small dense matrices and vector kernels.
*/

#include <cstddef>
#include <span>
#include <vector>

namespace pcgb {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vector multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;
  /// Frobenius norm.
  double norm() const;
  /// Largest |a_ij - a_ji| relative to the Frobenius norm.
  double asymmetry() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/**
 * @brief Compressed sparse row matrix.
 *
 * Column indices are strictly increasing within each row. Instances are
 * immutable after construction.
 */
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Validates the layout; throws std::invalid_argument on inconsistent input.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Duplicate entries are summed. Explicit zeros are kept.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> d);
  static SparseMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  /// Entry lookup; zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;
  /// y = A^T x without forming the transpose.
  Vector multiply_transposed(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double factor) const;
  bool is_symmetric(double rel_tol = 1e-12) const;

  DenseMatrix to_dense() const;
  /// Dense submatrix A(rows, cols) for sorted index lists.
  DenseMatrix extract(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  /// Sparse principal submatrix A(idx, idx) for a sorted index list.
  SparseMatrix principal_submatrix(std::span<const std::size_t> idx) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument when x.size() != A.cols().
Vector spmv(const SparseMatrix& A, std::span<const double> x);

/// Sparse product A*B.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace pcgb
