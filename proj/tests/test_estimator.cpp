#include <random>
#include <sstream>

#include <doctest.h>

#include "pcgbound/estimator.hpp"
#include "pcgbound/synthetic.hpp"

using namespace pcgb;

TEST_CASE("c I fires at the first check with ms = 1")
{
  const auto A = SparseMatrix::diagonal(Vector(20, 5.0));
  const auto res = pcg(A, Vector(20, 1.0), {});
  RitzEstimator est({});
  est.on_iteration(res.trace);
  REQUIRE(est.estimate());
  CHECK(est.estimate()->iteration == 1);
  CHECK(est.estimate()->ms == 1);
  CHECK(est.estimate()->m1 == m1(1.0, 1e-8));
  CHECK(est.estimate()->confidence == 1.0);
  CHECK(est.checks().front().invariant);
}

TEST_CASE("identity converges in one step with ms = 1")
{
  const auto A = SparseMatrix::identity(7);
  const auto res = pcg(A, Vector(7, 2.0), {});
  const auto est = replay_estimator({}, res.trace);
  const auto rec = final_report(est, res);
  CHECK(rec.m == 1);
  // the classical bound keeps its ln(2/eps) term even at kappa = 1
  CHECK(rec.m1 == 10);
  CHECK(rec.ms_converged == 1);
  CHECK(rec.s_converged == 1);
  CHECK(rec.kappa_ritz == doctest::Approx(1.0));
}

TEST_CASE("checks run every eta iterations until the estimate fires")
{
  std::mt19937_64 rng(4);
  const auto spectrum = clustered_spectrum({{1, 5, 20}, {1e4, 3e4, 200}}, rng);
  const auto res = solve_diagonal(diagonal_system(spectrum, rng), 1e-8);
  EstimatorConfig cfg;
  cfg.check_period = 3;
  const auto est = replay_estimator(cfg, res.trace);
  REQUIRE_FALSE(est.checks().empty());
  for (const auto& c : est.checks())
    CHECK((c.iteration % 3 == 0 || c.invariant));
  if (est.estimate()) {
    CHECK(est.checks().back().fired);
    CHECK(est.estimate()->iteration == est.checks().back().iteration);
    CHECK(est.estimate()->confidence <= 1.0);
  }
}

TEST_CASE("firing needs two comparable checks with stable edges")
{
  std::mt19937_64 rng(8);
  const auto spectrum = clustered_spectrum({{1, 4, 30}, {1e5, 4e5, 150}}, rng);
  const auto res = solve_diagonal(diagonal_system(spectrum, rng), 1e-8);
  const auto est = replay_estimator({}, res.trace);
  for (const auto& c : est.checks()) {
    if (!c.fired || c.invariant)
      continue;
    CHECK(c.comparable);
    for (double r : c.edge_ratios)
      CHECK(std::max(r, 1 / r) < 1.1);
  }
}

TEST_CASE("the run fraction caps replayed checks")
{
  EstimatorConfig cfg;
  cfg.known_total = 30;
  CHECK(cfg.cap() == 15);
  cfg.known_total = 1000;
  CHECK(cfg.cap() == 100);
  cfg.run_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("edge sets")
{
  const Spectrum s({1, 2, 10, 20, 100});
  const ClusterPartition p(s, {0, 2, 4, 5});
  CHECK(cluster_edges(s, p) == std::vector<double>{1, 2, 10, 20, 100, 100});
  CHECK(cluster_edges(s, p, EdgeSet::boundaries) == std::vector<double>{1, 2, 20, 100});
}

TEST_CASE("longer runs never lose information")
{
  // ms from Ritz values of a prefix is a lower estimate that grows with the prefix
  std::mt19937_64 rng(12);
  const auto spectrum = clustered_spectrum({{1, 3, 10}, {1e3, 5e3, 300}}, rng);
  const auto res = solve_diagonal(diagonal_system(spectrum, rng), 1e-8);
  double prev_kappa = 1.0;
  for (std::size_t m = 1; m <= res.trace.iterations(); ++m) {
    const double kappa = ritz_values(res.trace, m).condition_number();
    CHECK(kappa >= prev_kappa * (1 - 1e-12));
    prev_kappa = kappa;
  }
  CHECK(prev_kappa <= spectrum.condition_number() * (1 + 1e-10));
}

TEST_CASE("event log has one line per check")
{
  std::mt19937_64 rng(1);
  const auto spectrum = clustered_spectrum({{1, 10, 50}}, rng);
  const auto res = solve_diagonal(diagonal_system(spectrum, rng), 1e-8);
  const auto est = replay_estimator({}, res.trace);
  std::ostringstream os;
  est.write_events(os);
  std::size_t lines = 0;
  for (char c : os.str())
    lines += c == '\n';
  CHECK(lines >= est.checks().size());
}

TEST_CASE("Ritz values at termination give the exact-spectrum ms")
{
  const Spectrum spectrum({1.0, 1.3, 1.7, 2.0, 4e3, 5e3, 6e3, 8e3});
  const auto A = SparseMatrix::diagonal(spectrum.values());
  PCGOptions opt;
  opt.stop.tolerance = 1e-300;
  opt.stop.max_iterations = spectrum.size();
  const auto res = pcg(A, Vector(spectrum.size(), 1.0), opt);
  REQUIRE(res.trace.iterations() == spectrum.size());
  const auto rec = final_report(replay_estimator({}, res.trace), res);
  const auto exact = cluster_degrees(spectrum, greedy_partition(spectrum).partition, 1e-8);
  CHECK(rec.ms_converged == ms(exact));
  CHECK(rec.s_converged == exact.clusters());
}
