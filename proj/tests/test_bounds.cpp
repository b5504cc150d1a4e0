#include <cmath>
#include <random>

#include <doctest.h>

#include "pcgbound/bounds.hpp"
#include "pcgbound/partition.hpp"
#include "pcgbound/synthetic.hpp"

using namespace pcgb;

namespace {

double ref_log_cheb(unsigned q, double x)
{
  if (std::abs(x) <= 1.0)
    return std::log(std::abs(std::cos(q * std::acos(x))));
  return std::log(std::cosh(q * std::acosh(std::abs(x))));
}

}  // namespace

TEST_CASE("affine map onto [-1, 1]")
{
  const Interval I{1.0, 3.0};
  CHECK(affine_map(I, 2.0) == 0.0);
  CHECK(affine_map(I, 0.0) == -2.0);
  CHECK(affine_map(I, 3.0) == 1.0);
  CHECK(affine_map(I, 1.0) == -1.0);
}

TEST_CASE("Chebyshev magnitudes")
{
  CHECK(log_abs_chebyshev(0, 5.0) == 0.0);
  CHECK(log_abs_chebyshev(2, 3.0) == doctest::Approx(std::log(17.0)));
  CHECK(log_abs_chebyshev(3, 0.5) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(std::isinf(log_abs_chebyshev(1, 0.0)));
  for (unsigned q : {1u, 4u, 9u, 25u})
    for (double x : {-0.9, -0.3, 0.77, 1.0, 1.5, -4.0, 30.0})
      CHECK(log_abs_chebyshev(q, x) == doctest::Approx(ref_log_cheb(q, x)).epsilon(1e-9).scale(1.0));
  // far beyond double range: ln C_q(x) ~ q ln(x + sqrt(x^2 - 1)) - ln 2
  const double x = 1e6;
  CHECK(log_abs_chebyshev(5000, x) ==
        doctest::Approx(5000 * std::log(x + std::sqrt(x * x - 1)) - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("scaled Chebyshev factor")
{
  const Interval I{1.0, 4.0};
  CHECK(log_abs_scaled_cheb(I, 3, 0.0) == 0.0);
  CHECK(log_abs_scaled_cheb(I, 0, 2.0) == 0.0);
  // degree 1: (1 - 2 lambda / (l + u))
  CHECK(log_abs_scaled_cheb(I, 1, 1.0) == doctest::Approx(std::log(0.6)));
  // on the interval the factor is at most 1 / C_q(T(0)) = 2 gamma^q / (1 + gamma^{2q})
  const double g = (std::sqrt(4.0) - 1) / (std::sqrt(4.0) + 1);
  const double bound = std::log(2 * std::pow(g, 6) / (1 + std::pow(g, 12)));
  for (double lambda = 1.0; lambda <= 4.0; lambda += 0.01)
    CHECK(log_abs_scaled_cheb(I, 6, lambda) <= bound + 1e-12);
  CHECK(log_abs_scaled_cheb(I, 6, 4.0) == doctest::Approx(bound));
}

TEST_CASE("singleton cluster factor is linear")
{
  const Interval I{2.0, 2.0};
  CHECK(I.degenerate());
  CHECK(log_abs_scaled_cheb(I, 1, 1.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_abs_scaled_cheb(I, 2, 6.0) == doctest::Approx(2 * std::log(2.0)));
  CHECK(std::isinf(log_abs_scaled_cheb(I, 1, 2.0)));
}

TEST_CASE("growth outside the cluster is monotone")
{
  const Interval I{1.0, 10.0};
  double prev = log_abs_scaled_cheb(I, 7, 10.0);
  for (double lambda = 11.0; lambda < 1e6; lambda *= 1.3) {
    const double v = log_abs_scaled_cheb(I, 7, lambda);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("classical bound m1")
{
  CHECK(m1(100.0, 1e-8) == 96);
  CHECK(m1(1e8, 1e-8) == 95570);
  CHECK(m1(1.0, 1e-8) == 10);
  CHECK(m1(1e6, 2.0) == 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double kappa = std::pow(10.0, u(rng));
    const double expect = std::floor(std::sqrt(kappa) / 2 * std::log(2e8) + 1);
    CHECK(m1(kappa, 1e-8) == static_cast<long>(expect));
  }
}

TEST_CASE("two-cluster bound m2")
{
  auto ref = [](double k, double k1, double k2, double eps) {
    const double lg = std::log(4 * k / k1);
    return static_cast<long>(std::floor(1 + std::sqrt(k2) / 2 * lg +
                                        0.5 * std::log(2 / eps) *
                                            (std::sqrt(k1) + std::sqrt(k2) + std::sqrt(k1 * k2) / 2 * lg)));
  };
  CHECK(m2(1e8, 10, 10, 1e-8) == ref(1e8, 10, 10, 1e-8));
  CHECK(m2(1e4, 2, 3, 1e-6) == ref(1e4, 2, 3, 1e-6));
  // k1 = k2 = 1, kappa = 4: 1 + 0.5 ln 16 + 0.5 ln(2e8) (2 + 0.5 ln 16)
  CHECK(m2(4, 1, 1, 1e-8) == static_cast<long>(std::floor(1 + 0.5 * std::log(16.0) +
                                                          0.5 * std::log(2e8) * (2 + 0.5 * std::log(16.0)))));
  CHECK(m2(1e8, 10, 10, 1e-8) < m1(1e8, 1e-8));
}

TEST_CASE("two widely separated clusters")
{
  const Spectrum s({1.0, 1.5, 2.0, 1e6, 1.5e6, 2e6});
  const ClusterPartition part(s, {0, 3, 6});
  const auto poly = cluster_degrees(s, part, 1e-8);
  REQUIRE(poly.degrees.size() == 2);
  const double g = (std::sqrt(2.0) - 1) / (std::sqrt(2.0) + 1);
  // lowest cluster: ceil(ln(2/eps) / ln(1/gamma))
  CHECK(poly.degrees[0] == static_cast<long>(std::ceil(std::log(2e8) / std::log(1 / g))));
  CHECK(poly.degrees[1] > poly.degrees[0]);
  CHECK(ms(poly) == poly.degrees[0] + poly.degrees[1]);
  CHECK(verify_polynomial(s, poly, 1e-8).passed);
}

TEST_CASE("singletons get degree one and an exact zero")
{
  const Spectrum s({1.0, 2.0, 3.0});
  const auto poly = cluster_degrees(s, ClusterPartition::singletons(s), 1e-8);
  CHECK(poly.degrees == std::vector<long>{1, 1, 1});
  const auto check = verify_polynomial(s, poly, 1e-8);
  CHECK(check.passed);
  CHECK(std::isinf(check.max_log_abs));
}

TEST_CASE("partition validation")
{
  const Spectrum s({1.0, 2.0, 2.0, 3.0});
  CHECK_THROWS_AS(ClusterPartition(s, {0, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(ClusterPartition(s, {0, 3}), std::invalid_argument);
  CHECK_NOTHROW(ClusterPartition(s, {0, 1, 4}));
}

TEST_CASE("every partition of a random spectrum yields a verified polynomial")
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto spectrum = clustered_spectrum(random_clusters(rng, {4, 120, 1e10, 20}), rng);
    for (double eps : {1e-4, 1e-8, 1e-12}) {
      const auto greedy = greedy_partition(spectrum, eps).partition;
      std::vector<ClusterPartition> parts{ClusterPartition::single(spectrum), greedy};
      // a random coarser or finer split at a value change
      std::vector<std::size_t> idx{0};
      for (std::size_t k = 1; k < spectrum.size(); ++k)
        if (spectrum[k] > spectrum[k - 1] && std::uniform_int_distribution<int>(0, 9)(rng) == 0)
          idx.push_back(k);
      idx.push_back(spectrum.size());
      parts.emplace_back(spectrum, idx);
      for (const auto& part : parts) {
        const auto poly = cluster_degrees(spectrum, part, eps);
        const auto check = verify_polynomial(spectrum, poly, eps);
        CHECK(check.passed);
        CHECK(check.edges_pass);
      }
    }
  }
}

TEST_CASE("one cluster reduces to the classical bound up to the ceiling")
{
  const Spectrum s({1.0, 3.0, 50.0, 100.0});
  const auto poly = cluster_degrees(s, ClusterPartition::single(s), 1e-8);
  const double g = (10.0 - 1) / (10.0 + 1);
  CHECK(poly.degrees[0] == static_cast<long>(std::ceil(std::log(2e8) / std::log(1 / g))));
  CHECK(poly.degrees[0] <= m1(100.0, 1e-8));
}
