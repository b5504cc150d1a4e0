#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include <doctest.h>

#include "pcgbound/cholesky.hpp"
#include "pcgbound/eigen.hpp"
#include "pcgbound/io.hpp"
#include "pcgbound/linalg.hpp"
#include "pcgbound/spectrum.hpp"

using namespace pcgb;

namespace {

SparseMatrix random_spd(std::size_t n, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      B(i, j) = u(rng);
  DenseMatrix M = B * B.transpose();
  for (std::size_t i = 0; i < n; ++i)
    M(i, i) += static_cast<double>(n);
  return SparseMatrix::from_dense(M);
}

}  // namespace

TEST_CASE("spmv on a small nonsymmetric matrix")
{
  const auto A = SparseMatrix::from_triplets(2, 3, {{0, 0, 1}, {0, 2, 2}, {1, 1, 3}, {0, 0, 1}});
  CHECK(A.nnz() == 3);
  CHECK(A.at(0, 0) == 2.0);
  const auto y = spmv(A, std::vector<double>{1, 2, 3});
  CHECK(y == Vector{8, 6});
  CHECK(A.multiply_transposed(std::vector<double>{1, 1}) == Vector{2, 3, 2});
  CHECK_THROWS_AS(spmv(A, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("malformed CSR layout is rejected")
{
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 2}, {1, 0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("transpose and symmetry")
{
  const auto A = SparseMatrix::from_triplets(3, 3, {{0, 1, 2}, {1, 0, 2}, {2, 2, 5}, {0, 2, 1}});
  CHECK_FALSE(A.is_symmetric());
  CHECK(A.transpose().transpose() == A);
  CHECK(multiply(A, SparseMatrix::identity(3)) == A);
}

TEST_CASE("Cholesky of a 2x2 system")
{
  // [4 1; 1 3] x = [1; 2] has x = (1/11, 7/11)
  const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
  const auto L = CholeskyFactor::factor(A);
  const auto x = L.solve(std::vector<double>{1, 2});
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-14));
  CHECK(L.lower()(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("Cholesky rejects an indefinite matrix")
{
  const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 1}});
  CHECK_THROWS_AS(CholeskyFactor::factor(A), std::runtime_error);
}

TEST_CASE("Cholesky reproduces L L^T and solves random SPD systems")
{
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 5u, 17u}) {
    const auto A = random_spd(n, rng);
    const auto F = CholeskyFactor::factor(A);
    const DenseMatrix L = F.lower();
    const DenseMatrix LLt = L * L.transpose();
    const DenseMatrix Ad = A.to_dense();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(LLt(i, j) == doctest::Approx(Ad(i, j)).epsilon(1e-12));
    Vector b(n);
    for (std::size_t i = 0; i < n; ++i)
      b[i] = static_cast<double>(i) - 2.0;
    const auto x = F.solve(b);
    const auto r = A.multiply(x);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }
}

TEST_CASE("tridiagonal eigenvalues")
{
  const auto two = tridiag_eigenvalues(SymTridiagonal({2, 2}, {1}));
  CHECK(two[0] == doctest::Approx(1.0));
  CHECK(two[1] == doctest::Approx(3.0));
  const auto three = tridiag_eigenvalues(SymTridiagonal({0, 0, 0}, {1, 1}));
  CHECK(three[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(std::abs(three[1]) < 1e-14);
  CHECK(three[2] == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(SymTridiagonal({1, 2}, {}), std::invalid_argument);
}

TEST_CASE("discrete Laplacian eigenvalues 2 - 2 cos(k pi / (n + 1))")
{
  const std::size_t n = 40;
  const auto ev = tridiag_eigenvalues(SymTridiagonal(Vector(n, 2.0), Vector(n - 1, -1.0)));
  for (std::size_t k = 1; k <= n; ++k)
    CHECK(ev[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * M_PI / (n + 1))).epsilon(1e-12));
}

TEST_CASE("dense eigen decomposition")
{
  std::mt19937_64 rng(3);
  const auto A = random_spd(12, rng).to_dense();
  const auto eig = dense_sym_eigen(A);
  double trace = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 12; ++i) {
    trace += A(i, i);
    sum += eig.values[i];
  }
  CHECK(sum == doctest::Approx(trace).epsilon(1e-12));
  for (std::size_t j = 0; j < 12; ++j) {
    Vector v(12);
    for (std::size_t i = 0; i < 12; ++i)
      v[i] = eig.vectors(i, j);
    const auto Av = A.multiply(v);
    for (std::size_t i = 0; i < 12; ++i)
      CHECK(Av[i] == doctest::Approx(eig.values[j] * v[i]).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(dense_sym_eigen(A, 5), std::length_error);
}

TEST_CASE("Matrix Market round trip")
{
  std::mt19937_64 rng(11);
  const auto A = random_spd(6, rng);
  std::stringstream ss;
  write_matrix_market(ss, A, true);
  CHECK(read_matrix_market(ss) == A);
}

TEST_CASE("formatted doubles read back exactly")
{
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -2.5})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("spectrum parsing reports the offending line")
{
  std::istringstream ok("# c\n1\n\n2.5\n");
  CHECK(read_spectrum(ok).values() == std::vector<double>{1.0, 2.5});
  std::istringstream bad("1\n2\nabc\n");
  try {
    read_spectrum(bad);
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream descending("2\n1\n");
  CHECK_THROWS_AS(read_spectrum(descending), ParseError);
  std::istringstream negative("-1\n");
  CHECK_THROWS_AS(read_spectrum(negative), ParseError);
}
