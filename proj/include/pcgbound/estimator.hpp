#pragma once

/** @file estimator.hpp
    @brief Early m_s estimation from Ritz values during a PCG run, gated on the
           stabilization of every cluster edge between two checks.
*/

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pcgbound/krylov.hpp"
#include "pcgbound/partition.hpp"

namespace pcgb {

enum class EdgeSet {
  all_endpoints,  ///< both ends of every cluster (default)
  boundaries,     ///< lambda_1 and the upper end of every cluster, s + 1 values
};

struct EstimatorConfig {
  std::size_t check_period = 5;        ///< eta
  double tolerance = 0.1;              ///< tau
  std::size_t max_iterations = 100;    ///< i_max
  double run_fraction = 0.5;           ///< r
  double eps = 1e-8;
  std::optional<std::size_t> known_total;  ///< final m, only in replay mode
  EdgeSet edges = EdgeSet::all_endpoints;

  void validate() const;
  /// Last iteration at which a check may run: min(i_max, ceil(r m)) when m is known.
  std::size_t cap() const;
};

struct EstimatorCheck {
  std::size_t iteration = 0;
  std::size_t ritz_count = 0;
  std::vector<std::size_t> partition;
  std::vector<double> edges;
  std::vector<double> edge_ratios;  ///< empty unless comparable with the previous check
  bool comparable = false;          ///< same cluster count as the previous check
  bool stabilized = false;
  bool invariant = false;           ///< Krylov space became invariant, Ritz values are exact
  bool fired = false;
};

struct EarlyEstimate {
  std::size_t iteration = 0;
  long ms = 0;
  long m1 = 0;
  std::size_t clusters = 0;
  double kappa = 1.0;
  double confidence = 0.0;  ///< min(1, iteration / ms)
};

/// all_endpoints: lower_1, upper_1, lower_2, ...; boundaries: lower_1, upper_1, upper_2, ...
std::vector<double> cluster_edges(const Spectrum& spectrum, const ClusterPartition& partition,
                                  EdgeSet set = EdgeSet::all_endpoints);

class RitzEstimator {
 public:
  explicit RitzEstimator(EstimatorConfig config);

  /// Feed the trace after iteration @p iteration (1-based, <= trace.iterations()).
  void on_iteration(const CGTrace& trace, std::size_t iteration);
  void on_iteration(const CGTrace& trace) { on_iteration(trace, trace.iterations()); }

  /// Solver hook; asks the solver to stop once fired if @p stop_when_done.
  CGObserver observer(bool stop_when_done = false);

  const EstimatorConfig& config() const { return config_; }
  const std::optional<EarlyEstimate>& estimate() const { return estimate_; }
  const std::vector<EstimatorCheck>& checks() const { return checks_; }
  /// Passed the cap without firing.
  bool gave_up() const { return gave_up_; }
  bool done() const { return estimate_.has_value() || gave_up_; }

  /// JSON lines, one per check.
  void write_events(std::ostream& out) const;

 private:
  EstimatorConfig config_;
  std::vector<EstimatorCheck> checks_;
  std::optional<EarlyEstimate> estimate_;
  bool gave_up_ = false;
};

struct ComparisonRecord {
  std::size_t m = 0;
  bool converged = false;
  long m1 = 0;                  ///< from the converged Ritz condition number
  long ms_converged = 0;
  std::size_t s_converged = 0;
  double kappa_ritz = 1.0;
  std::optional<EarlyEstimate> early;
};

/// Assemble the comparison for a finished run. With an empty trace every bound is 0.
ComparisonRecord final_report(const RitzEstimator& estimator, const CGResult& result);

/// Replay: feed every prefix of a finished trace to a fresh estimator whose
/// run-fraction cap uses the known total.
RitzEstimator replay_estimator(EstimatorConfig config, const CGTrace& trace);

}  // namespace pcgb
