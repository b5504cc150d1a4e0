#include "pcgbound/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "pcgbound/bounds.hpp"

namespace pcgb {

void EstimatorConfig::validate() const
{
  if (check_period < 1)
    throw std::invalid_argument("estimator: check period must be >= 1");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("estimator: tolerance must be positive");
  if (max_iterations < check_period)
    throw std::invalid_argument("estimator: i_max must be >= check period");
  if (!(run_fraction > 0.0 && run_fraction <= 1.0))
    throw std::invalid_argument("estimator: run fraction must lie in (0, 1]");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("estimator: eps must lie in (0, 1)");
}

std::size_t EstimatorConfig::cap() const
{
  if (!known_total)
    return max_iterations;
  const auto r_cap = static_cast<std::size_t>(std::ceil(run_fraction * static_cast<double>(*known_total)));
  return std::min(max_iterations, r_cap);
}

std::vector<double> cluster_edges(const Spectrum& spectrum, const ClusterPartition& partition, EdgeSet set)
{
  std::vector<double> edges;
  edges.reserve(2 * partition.clusters());
  for (std::size_t c = 0; c < partition.clusters(); ++c) {
    const auto I = partition.interval(spectrum, c);
    if (c == 0 || set == EdgeSet::all_endpoints)
      edges.push_back(I.lower);
    edges.push_back(I.upper);
  }
  return edges;
}

RitzEstimator::RitzEstimator(EstimatorConfig config) : config_(config) { config_.validate(); }

void RitzEstimator::on_iteration(const CGTrace& trace, std::size_t i)
{
  if (done() || i == 0)
    return;
  if (i > trace.iterations())
    throw std::out_of_range("estimator: iteration beyond trace");
  if (i > config_.cap()) {
    gave_up_ = true;
    return;
  }
  // sqrt(beta) is the next Lanczos coupling relative to 1/alpha; below 1e-12 the
  // Krylov space is invariant to working precision and the Ritz values are final
  const bool invariant = trace.beta[i - 1] <= 1e-24;
  if (i % config_.check_period != 0 && !invariant)
    return;

  const Spectrum ritz = ritz_values(trace, i);
  const auto part = greedy_partition(ritz, config_.eps);

  EstimatorCheck check;
  check.iteration = i;
  check.ritz_count = ritz.size();
  check.partition = part.partition.indices();
  check.edges = cluster_edges(ritz, part.partition, config_.edges);
  check.invariant = invariant;

  if (!checks_.empty() && checks_.back().edges.size() == check.edges.size()) {
    check.comparable = true;
    check.stabilized = true;
    const auto& prev = checks_.back().edges;
    for (std::size_t k = 0; k < prev.size(); ++k) {
      const double r = check.edges[k] / prev[k];
      check.edge_ratios.push_back(r);
      // symmetric test: an edge drifting down counts as much as one drifting up
      if (!(std::max(r, 1.0 / r) < 1.0 + config_.tolerance))
        check.stabilized = false;
    }
  }

  if (check.stabilized || invariant) {
    check.fired = true;
    const auto poly = cluster_degrees(ritz, part.partition, config_.eps);
    EarlyEstimate e;
    e.iteration = i;
    e.ms = ms(poly);
    e.kappa = ritz.condition_number();
    e.m1 = m1(e.kappa, config_.eps);
    e.clusters = poly.clusters();
    e.confidence = std::min(1.0, static_cast<double>(i) / static_cast<double>(std::max<long>(e.ms, 1)));
    estimate_ = e;
  }
  checks_.push_back(std::move(check));
}

CGObserver RitzEstimator::observer(bool stop_when_done)
{
  return [this, stop_when_done](const CGTrace& trace) {
    on_iteration(trace);
    return stop_when_done && done() ? ObserverAction::stop : ObserverAction::proceed;
  };
}

void RitzEstimator::write_events(std::ostream& out) const
{
  for (const auto& c : checks_) {
    nlohmann::json j{{"iteration", c.iteration},
                     {"ritz_count", c.ritz_count},
                     {"partition", c.partition},
                     {"edges", c.edges},
                     {"edge_ratios", c.edge_ratios},
                     {"comparable", c.comparable},
                     {"stabilized", c.stabilized},
                     {"invariant", c.invariant},
                     {"fired", c.fired}};
    if (c.fired && estimate_) {
      j["ms"] = estimate_->ms;
      j["confidence"] = estimate_->confidence;
    }
    out << j.dump() << '\n';
  }
  if (gave_up_)
    out << nlohmann::json{{"event", "not stabilized"}, {"cap", config_.cap()}}.dump() << '\n';
}

ComparisonRecord final_report(const RitzEstimator& estimator, const CGResult& result)
{
  ComparisonRecord rec;
  rec.m = result.trace.iterations();
  rec.converged = result.converged();
  rec.early = estimator.estimate();
  if (rec.m == 0)
    return rec;
  const Spectrum ritz = ritz_values(result.trace);
  const double eps = estimator.config().eps;
  const auto part = greedy_partition(ritz, eps);
  const auto poly = cluster_degrees(ritz, part.partition, eps);
  rec.kappa_ritz = ritz.condition_number();
  rec.m1 = m1(rec.kappa_ritz, eps);
  rec.ms_converged = ms(poly);
  rec.s_converged = poly.clusters();
  return rec;
}

RitzEstimator replay_estimator(EstimatorConfig config, const CGTrace& trace)
{
  config.known_total = trace.iterations();
  RitzEstimator est(config);
  for (std::size_t i = 1; i <= trace.iterations() && !est.done(); ++i)
    est.on_iteration(trace, i);
  return est;
}

}  // namespace pcgb
