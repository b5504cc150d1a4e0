#include "pcgbound/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcgb {

Spectrum clustered_spectrum(const std::vector<ClusterSpec>& clusters, std::mt19937_64& rng)
{
  std::vector<double> values;
  for (const auto& c : clusters) {
    if (!(c.lower > 0.0) || c.upper < c.lower || c.count == 0)
      throw std::invalid_argument("clustered_spectrum: bad cluster");
    const double lo = std::log(c.lower), hi = std::log(c.upper);
    std::uniform_real_distribution<double> u(lo, hi);
    if (c.count == 1) {
      values.push_back(c.lower);
      continue;
    }
    values.push_back(c.lower);
    values.push_back(c.upper);
    for (std::size_t k = 2; k < c.count; ++k)
      values.push_back(std::exp(u(rng)));
  }
  return Spectrum::from_unsorted(std::move(values));
}

std::vector<ClusterSpec> random_clusters(std::mt19937_64& rng, const RandomSpectrumLimits& limits)
{
  std::uniform_int_distribution<std::size_t> pick_s(1, limits.max_clusters);
  const std::size_t s = pick_s(rng);
  std::uniform_int_distribution<std::size_t> pick_n(s, limits.max_size);
  const std::size_t n = pick_n(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_kappa = std::log(10.0) + unit(rng) * (std::log(limits.max_kappa) - std::log(10.0));

  // cluster starts: 0 and s-1 sorted random points, each cluster at most
  // max_cluster_kappa wide and never reaching past half the gap to the next
  std::vector<double> starts{0.0};
  for (std::size_t i = 1; i < s; ++i)
    starts.push_back(unit(rng) * log_kappa);
  std::sort(starts.begin(), starts.end());
  starts.push_back(log_kappa);

  std::vector<ClusterSpec> out(s);
  // one eigenvalue per cluster, the rest distributed uniformly
  std::vector<std::size_t> counts(s, 1);
  std::uniform_int_distribution<std::size_t> pick_c(0, s - 1);
  for (std::size_t k = s; k < n; ++k)
    ++counts[pick_c(rng)];

  const double max_width = std::log(limits.max_cluster_kappa);
  for (std::size_t i = 0; i < s; ++i) {
    const double room = starts[i + 1] - starts[i];
    double width = unit(rng) * std::min(max_width, i + 1 < s ? 0.5 * room : room);
    double lower = starts[i];
    if (i + 1 == s) {
      // last cluster ends exactly at kappa
      width = std::min(width, room);
      lower = log_kappa - width;
      if (s == 1) {
        lower = 0.0;
        width = log_kappa;
      }
    }
    out[i] = {std::exp(lower), std::exp(lower + width), counts[i]};
  }
  return out;
}

DiagonalSystem diagonal_system(const Spectrum& spectrum, std::mt19937_64& rng)
{
  DiagonalSystem sys;
  sys.A = SparseMatrix::diagonal(spectrum.values());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  sys.b.resize(spectrum.size());
  sys.reference.resize(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    double v = u(rng);
    if (v == 0.0)
      v = 1.0;
    sys.b[i] = v;
    sys.reference[i] = v / spectrum[i];
  }
  return sys;
}

CGResult solve_diagonal(const DiagonalSystem& system, double eps, CGObserver observer, std::size_t max_iterations)
{
  PCGOptions opt;
  opt.stop = {StopMode::energy_error, eps, max_iterations};
  opt.reference = system.reference;
  opt.observer = std::move(observer);
  return pcg(system.A, system.b, opt);
}

}  // namespace pcgb
