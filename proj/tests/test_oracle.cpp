#include <doctest.h>

#include "pcgbound/oracle.hpp"
#include "pcgbound/schwarz.hpp"

using namespace pcgb;

TEST_CASE("without a preconditioner the oracle returns eig(A)")
{
  const auto s = preconditioned_spectrum(SparseMatrix::diagonal(Vector{3, 1, 2}), {});
  CHECK(s.values() == std::vector<double>{1, 2, 3});
}

TEST_CASE("Jacobi on a diagonal matrix gives the unit spectrum")
{
  const Vector d{1, 10, 1e4, 1e8};
  const LinearOperator jacobi = [&](std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < r.size(); ++i)
      z[i] = r[i] / d[i];
  };
  for (auto route : {OracleRoute::inverse_sqrt, OracleRoute::cholesky}) {
    const auto s = preconditioned_spectrum(SparseMatrix::diagonal(d), jacobi, 10, route);
    for (double v : s.values())
      CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("both oracle routes agree on a preconditioned grid problem")
{
  const auto grid = GridSpec::from_H(0.25, 4);
  const auto p = assemble(grid, build_coefficient_field(grid, {1, 2, 1, 1.0, 1e4}));
  const auto M = SchwarzPreconditioner::assemble(p.A, decompose(grid, 1), CoarseKind::gdsw);
  const LinearOperator apply = [&M](std::span<const double> r, std::span<double> z) { M.apply(r, z); };
  const auto a = preconditioned_spectrum(p.A, apply, 300, OracleRoute::inverse_sqrt);
  const auto b = preconditioned_spectrum(p.A, apply, 300, OracleRoute::cholesky);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-8));
  CHECK_THROWS_AS(preconditioned_spectrum(p.A, apply, 100), std::length_error);
}

TEST_CASE("an asymmetric operator is rejected")
{
  const LinearOperator skew = [](std::span<const double> r, std::span<double> z) {
    z[0] = r[0] + r[1];
    z[1] = r[1];
  };
  CHECK_THROWS_AS(dense_inverse_preconditioner(2, skew), std::invalid_argument);
}
