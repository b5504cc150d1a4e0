// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance 1 4 9      run a subset
//
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pcgbound/bounds.hpp"
#include "pcgbound/estimator.hpp"
#include "pcgbound/experiment.hpp"
#include "pcgbound/io.hpp"
#include "pcgbound/partition.hpp"
#include "pcgbound/report.hpp"
#include "pcgbound/synthetic.hpp"

using namespace pcgb;
namespace fs = std::filesystem;

namespace {

constexpr double kEps = 1e-8;
constexpr std::uint64_t kSuiteSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SuiteCase {
  std::vector<ClusterSpec> clusters;
  Spectrum spectrum;
  PartitionResult partition;
  ClusterPolynomial poly;
};

// 100 random clustered spectra: s in 1..4, n <= 400, kappa up to 1e10
const std::vector<SuiteCase>& suite()
{
  static const std::vector<SuiteCase> cases = [] {
    std::mt19937_64 rng(kSuiteSeed);
    RandomSpectrumLimits limits;
    limits.max_clusters = 4;
    limits.max_size = 400;
    limits.max_kappa = 1e10;
    std::vector<SuiteCase> out;
    for (int k = 0; k < 100; ++k) {
      SuiteCase c;
      c.clusters = random_clusters(rng, limits);
      c.spectrum = clustered_spectrum(c.clusters, rng);
      c.partition = greedy_partition(c.spectrum, kEps);
      c.poly = cluster_degrees(c.spectrum, c.partition.partition, kEps);
      out.push_back(std::move(c));
    }
    return out;
  }();
  return cases;
}

fs::path scratch(const std::string& name)
{
  auto dir = fs::temp_directory_path() / ("pcgbound_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome criterion1()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSuiteSeed + 1);
  int sound = 0, converged = 0;
  std::size_t worst_case = 0;
  double worst_ratio = 0.0;
  std::map<std::size_t, int> by_s;
  for (std::size_t k = 0; k < suite().size(); ++k) {
    const auto& c = suite()[k];
    ++by_s[c.clusters.size()];
    const auto sys = diagonal_system(c.spectrum, rng);
    const auto res = solve_diagonal(sys, kEps);
    converged += res.converged();
    const long m = static_cast<long>(res.trace.iterations());
    const long bound = ms(c.poly);
    if (res.converged() && m <= bound)
      ++sound;
    const double ratio = static_cast<double>(m) / static_cast<double>(bound);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_case = k;
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << sound << "/100 with m <= ms (" << converged << " converged), max m/ms = " << worst_ratio << " (case "
     << worst_case << "), s counts:";
  for (auto [s, n] : by_s)
    os << " s" << s << "=" << n;
  os << ", " << t << " s";
  return {sound == 100 && t < 60.0, os.str()};
}

Outcome criterion2()
{
  int passed = 0, reduced_failures = 0, reducible = 0;
  for (const auto& c : suite()) {
    passed += verify_polynomial(c.spectrum, c.poly, kEps).passed;
    auto weaker = c.poly;
    if (weaker.degrees.back() > 0) {
      ++reducible;
      --weaker.degrees.back();
      if (!verify_polynomial(c.spectrum, weaker, kEps).passed)
        ++reduced_failures;
    }
  }
  std::ostringstream os;
  os << passed << "/100 verified; last degree - 1 fails on " << reduced_failures << "/" << reducible;
  return {passed == 100 && reduced_failures >= 1, os.str()};
}

Outcome criterion3()
{
  std::mt19937_64 rng(kSuiteSeed + 3);
  std::vector<const SuiteCase*> multi;
  for (const auto& c : suite())
    if (c.poly.clusters() >= 2)
      multi.push_back(&c);
  if (multi.empty())
    return {false, "suite has no multi-cluster partition"};
  std::uniform_int_distribution<std::size_t> pick_case(0, multi.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int samples = 0, violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  while (samples < 10000) {
    const auto& c = *multi[pick_case(rng)];
    const std::size_t s = c.poly.clusters();
    std::uniform_int_distribution<std::size_t> pick_i(1, s - 1);
    const std::size_t i = pick_i(rng);
    std::uniform_int_distribution<std::size_t> pick_j(0, i - 1);
    const std::size_t j = pick_j(rng);
    const auto Ij = c.poly.intervals[j];
    const double lambda = Ij.lower + unit(rng) * (Ij.upper - Ij.lower);
    const double v = log_abs_scaled_cheb(c.poly.intervals[i], static_cast<unsigned>(c.poly.degrees[i]), lambda);
    worst = std::max(worst, v);
    if (!(v < 0.0))
      ++violations;
    ++samples;
  }
  std::ostringstream os;
  os << samples << " triples from " << multi.size() << " partitions, " << violations
     << " with log|C| >= 0, max log|C| = " << worst;
  return {violations == 0, os.str()};
}

Outcome criterion4()
{
  const long a = m1(100.0, 1e-8), b = m1(1e8, 1e-8);
  std::mt19937_64 rng(kSuiteSeed + 4);
  std::uniform_real_distribution<double> logk(0.0, 10.0 * std::log(10.0));
  const double eps_list[] = {1e-4, 1e-8, 1e-12};
  int agree = 0, total = 0;
  double smallest_bad_kappa = std::numeric_limits<double>::infinity();
  double largest_bad_kappa = 0.0;
  for (int k = 0; k < 1000; ++k) {
    for (double eps : eps_list) {
      const double kappa = std::exp(logk(rng));
      const Spectrum sp({1.0, kappa});
      const auto poly = cluster_degrees(sp, ClusterPartition::single(sp), eps);
      const long diff = std::labs(ms(poly) - m1(kappa, eps));
      ++total;
      if (diff <= 1) {
        ++agree;
      } else {
        smallest_bad_kappa = std::min(smallest_bad_kappa, kappa);
        largest_bad_kappa = std::max(largest_bad_kappa, kappa);
      }
    }
  }
  std::ostringstream os;
  os << "m1(100,1e-8) = " << a << ", m1(1e8,1e-8) = " << b << "; s = 1 |ms - m1| <= 1 in " << agree << "/" << total;
  if (agree < total)
    os << " (disagreements for kappa in [" << smallest_bad_kappa << ", " << largest_bad_kappa << "])";
  return {a == 96 && b == 95570 && agree == total, os.str()};
}

Outcome criterion5()
{
  int bad = 0;
  double worst = 0.0;
  const double lo = std::log(1e-12), hi = std::log(std::exp(-1.0));
  const int count = 10000;
  for (int k = 0; k < count; ++k) {
    // log-spaced magnitudes in [1e-12, 1/e), the branch point itself excluded
    const double x = -std::exp(lo + (hi - lo) * k / count);
    const double w = lambert_w_minus1(x);
    const double rel = std::abs(w * std::exp(w) - x) / std::abs(x);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-12) || !(w <= -1.0))
      ++bad;
  }
  const double branch = lambert_w_minus1(-std::exp(-1.0));
  std::ostringstream os;
  os << count << " points, " << bad << " above 1e-12 relative residual (max " << worst << "); W(-1/e) = " << branch;
  return {bad == 0 && std::abs(branch + 1.0) <= 1e-6, os.str()};
}

ExperimentConfig pde_config(double H, CoarseKind coarse)
{
  ExperimentConfig cfg;
  cfg.problem.H = H;
  cfg.problem.H_over_h = 16;
  cfg.problem.pattern.contrast = 1e8;
  cfg.preconditioner.coarse = coarse;
  cfg.eps = kEps;
  cfg.stop.tolerance = kEps;
  return cfg;
}

Outcome criterion6()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto row = cmd_solve(pde_config(0.25, CoarseKind::gdsw), scratch("c6"));
  const double t = seconds_since(t0);
  const double m = static_cast<double>(row.m);
  const double r1 = row.m1 / m, rs = row.ms_converged / m;
  std::ostringstream os;
  os << "H = 1/4 GDSW: status " << row.status << ", m = " << row.m << ", m1 = " << row.m1 << " (m1/m = " << r1
     << "), ms = " << row.ms_converged << " (ms/m = " << rs << "), " << t << " s";
  return {row.ok() && row.m <= 200 && r1 >= 100.0 && rs >= 0.5 && rs <= 20.0 && t < 120.0, os.str()};
}

Outcome criterion7()
{
  const auto g = cmd_solve(pde_config(1.0 / 16, CoarseKind::gdsw), scratch("c7g"));
  const auto r = cmd_solve(pde_config(1.0 / 16, CoarseKind::rgdsw), scratch("c7r"));
  const double m1_ratio = static_cast<double>(std::max(g.m1, r.m1)) / static_cast<double>(std::min(g.m1, r.m1));
  std::ostringstream os;
  os << "H = 1/16: m " << r.m << " (RGDSW) vs " << g.m << " (GDSW); ms " << r.ms_converged << " vs "
     << g.ms_converged << "; m1 " << r.m1 << " vs " << g.m1 << " (ratio " << m1_ratio << ")";
  return {g.ok() && r.ok() && r.m > g.m && r.ms_converged > g.ms_converged && m1_ratio <= 2.0, os.str()};
}

Outcome criterion8()
{
  // a few low outliers below a large bulk, like the preconditioned PDE spectra
  std::mt19937_64 rng(kSuiteSeed + 8);
  std::uniform_int_distribution<std::size_t> low_count(4, 40), bulk_count(100, 400);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EstimatorConfig cfg;
  cfg.check_period = 5;
  cfg.tolerance = 0.1;
  cfg.eps = kEps;
  int good = 0, fired = 0;
  std::ostringstream misses;
  for (int k = 0; k < 50; ++k) {
    const double k1 = std::exp(unit(rng) * std::log(10.0));
    const double k2 = std::exp(unit(rng) * std::log(10.0));
    const double start2 = k1 * std::exp(std::log(1e3) + unit(rng) * std::log(1e5));
    const std::vector<ClusterSpec> clusters{{1.0, k1, low_count(rng)}, {start2, start2 * k2, bulk_count(rng)}};
    const auto spectrum = clustered_spectrum(clusters, rng);
    const auto sys = diagonal_system(spectrum, rng);
    const auto res = solve_diagonal(sys, kEps);
    const auto est = replay_estimator(cfg, res.trace);
    const double m = static_cast<double>(res.trace.iterations());
    if (!est.estimate()) {
      misses << " case " << k << ": not fired (m = " << m << ");";
      continue;
    }
    ++fired;
    const auto& e = *est.estimate();
    const double ratio = static_cast<double>(e.ms) / m;
    const bool early = static_cast<double>(e.iteration) < 0.5 * m;
    if (early && ratio >= 0.1 && ratio <= 10.0)
      ++good;
    else
      misses << " case " << k << ": i = " << e.iteration << ", ms = " << e.ms << ", m = " << m << ";";
  }
  std::ostringstream os;
  os << good << "/50 fired before m/2 with ms within 10x of m (" << fired << " fired)";
  if (good < 50)
    os << ";" << misses.str();
  return {good >= 45, os.str()};
}

Outcome criterion9()
{
  // H = 1/4 with H/h = 6 gives n = 23^2 = 529
  auto cfg = pde_config(0.25, CoarseKind::gdsw);
  cfg.problem.H_over_h = 6;
  cfg.problem.pattern.inclusions_per_edge = 1;
  cfg.problem.pattern.channel_half_length = 2;
  cfg.oracle_cap = 600;
  const auto dir = scratch("c9");
  const auto row = cmd_solve(cfg, dir);
  if (!row.ok())
    return {false, "toy solve failed: " + row.status};
  const auto ritz = read_spectrum(dir / "ritz.txt");
  const auto oracle = read_spectrum(dir / "oracle.txt");
  const double lo = std::abs(ritz.front() - oracle.front()) / oracle.front();
  const double hi = std::abs(ritz.back() - oracle.back()) / oracle.back();
  const auto replayed = to_json(cmd_bound(dir / "oracle.txt", cfg.eps)).dump(2) + "\n";
  const bool same = replayed == read_file(dir / "bound_oracle.json");
  std::ostringstream os;
  os << "n = " << row.n << ", m = " << row.m << ", lambda_min rel diff " << lo << ", lambda_max rel diff " << hi
     << ", oracle kappa " << oracle.condition_number() << ", cmd_bound report "
     << (same ? "identical" : "DIFFERS");
  return {row.n <= 600 && lo <= 1e-6 && hi <= 1e-6 && same, os.str()};
}

}  // namespace

int main(int argc, char** argv)
{
  const std::vector<std::pair<int, std::function<Outcome()>>> all{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a)
    wanted.push_back(std::stoi(argv[a]));

  int failures = 0;
  for (const auto& [id, fn] : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end())
      continue;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << out.detail << std::endl;
    failures += !out.pass;
  }
  return failures;
}
