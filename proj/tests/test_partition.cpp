#include <cmath>
#include <random>

#include <doctest.h>

#include "pcgbound/partition.hpp"
#include "pcgbound/synthetic.hpp"

using namespace pcgb;

TEST_CASE("Lambert W lower branch")
{
  CHECK(lambert_w_minus1(-0.1) == doctest::Approx(-3.577152063957297).epsilon(1e-12));
  CHECK(lambert_w_minus1(-1.0 / std::exp(1.0)) == doctest::Approx(-1.0).epsilon(1e-6));
  for (double x : {-0.3, -0.01, -1e-6, -1e-30, -1e-300}) {
    const double w = lambert_w_minus1(x);
    CHECK(w <= -1.0);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lambert_w_minus1(0.0), std::domain_error);
  CHECK_THROWS_AS(lambert_w_minus1(-0.5), std::domain_error);
}

TEST_CASE("expansion is close to W near zero")
{
  const double x = -1e-6;
  CHECK(std::abs(lambert_w_minus1_expansion(x) / lambert_w_minus1(x) - 1) < 0.01);
  const double L = std::log(1e-6), l = std::log(-L);
  CHECK(lambert_w_minus1_expansion(x) == doctest::Approx(L - l + l / L));
}

TEST_CASE("threshold terms")
{
  const auto t = threshold_terms(4.0, 9.0);
  CHECK(t.x == doctest::Approx(-1.0 / (2 * 3 * std::exp(1.0 / 3))));
  CHECK(t.w * std::exp(t.w) == doctest::Approx(t.x));
  CHECK(t.exact_threshold == doctest::Approx(4 * 4 * 9 * t.w * t.w));
  CHECK(t.expansion_threshold == doctest::Approx(4 * 4 * 9 * std::pow(t.L - t.l + t.l / t.L, 2)));
}

TEST_CASE("split candidate is the largest relative gap")
{
  const auto c = find_candidate(Spectrum({1, 2, 100, 110}));
  CHECK(c.split == 2);
  CHECK(c.gap == doctest::Approx(50.0));
  CHECK(c.kappa1 == doctest::Approx(2.0));
  CHECK(c.kappa2 == doctest::Approx(1.1));
  // ties go to the smallest index
  CHECK(find_candidate(Spectrum({1, 2, 4, 8})).split == 1);
  CHECK(find_candidate(Spectrum({1e-6, 1, 1e6})).split == 1);
}

TEST_CASE("two tight clusters far apart are split")
{
  const Spectrum s({1, 1.1, 1e8, 1.1e8});
  const auto r = greedy_partition(s);
  CHECK(r.partition.clusters() == 2);
  CHECK(r.partition.indices() == std::vector<std::size_t>{0, 2, 4});
  CHECK(r.decisions.front().accepted);
}

TEST_CASE("a uniform spectrum stays one cluster")
{
  std::vector<double> v;
  for (int i = 0; i < 100; ++i)
    v.push_back(1.0 + i / 99.0);
  const auto r = greedy_partition(Spectrum(v));
  CHECK(r.partition.clusters() == 1);
  CHECK_FALSE(r.decisions.front().accepted);
}

TEST_CASE("acceptance rules agree far from the threshold")
{
  const Spectrum s({1, 1.1, 1e8, 1.1e8});
  const auto d = accept_split(s, find_candidate(s), 1e-8);
  CHECK(d.accept_exact);
  CHECK(d.accept_expansion);
  CHECK(d.accept_direct);
  CHECK(d.m2 < d.m1);
}

TEST_CASE("greedy partition never makes ms worse than m1")
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spectrum = clustered_spectrum(random_clusters(rng), rng);
    const auto r = greedy_partition(spectrum);
    const auto poly = cluster_degrees(spectrum, r.partition, 1e-8);
    CHECK(ms(poly) <= m1(spectrum.condition_number(), 1e-8));
    // decisions come depth first, lower part first
    for (const auto& d : r.decisions)
      CHECK(d.offset + d.size <= spectrum.size());
  }
}
