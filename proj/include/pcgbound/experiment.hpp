#pragma once

/** @file experiment.hpp
    @brief Experiment configuration and the commands behind the command line tool.
*/

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcgbound/estimator.hpp"
#include "pcgbound/krylov.hpp"
#include "pcgbound/problem.hpp"
#include "pcgbound/report.hpp"
#include "pcgbound/schwarz.hpp"
#include "pcgbound/synthetic.hpp"

namespace pcgb {

/// Bad configuration or input file; the tool maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  double H = 0.25;
  int H_over_h = 16;
  InclusionPattern pattern;
  LoadSpec load;
};

struct PreconditionerConfig {
  CoarseKind coarse = CoarseKind::gdsw;
  int overlap = 2;  ///< element layers
};

struct SweepConfig {
  std::vector<double> H;
  std::vector<CoarseKind> coarse{CoarseKind::gdsw, CoarseKind::rgdsw};
};

struct SyntheticConfig {
  std::vector<std::filesystem::path> spectra;  ///< relative paths resolve against the config file
  std::size_t random_count = 0;
  RandomSpectrumLimits limits;
};

struct ExperimentConfig {
  ProblemConfig problem;
  PreconditionerConfig preconditioner;
  StopRule stop{StopMode::residual, 1e-8, 100000};
  EstimatorConfig estimator;
  std::optional<SweepConfig> sweep;
  std::optional<SyntheticConfig> synthetic;
  double eps = 1e-8;
  std::size_t oracle_cap = default_oracle_cap;
  std::uint64_t seed = 0;
  std::filesystem::path output = "out";
  unsigned jobs = 1;

  /// Throws ConfigError on unknown keys, wrong types or invalid values.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

/// One (H, coarse space) cell of the results table.
struct ResultRow {
  double H = 0.0;
  CoarseKind coarse = CoarseKind::gdsw;
  std::size_t n = 0;
  std::string status;  ///< converged, max_iterations, stopped_by_observer or "error: ..."
  std::size_t m = 0;
  long m1 = 0;
  long ms_converged = 0;
  std::optional<long> ms_early;
  std::optional<std::size_t> i_early;
  double kappa = 0.0;
  std::string kappa_source;  ///< oracle or ritz
  std::size_t s = 0;
  double wall_seconds = 0.0;  ///< kept out of the deterministic CSV

  bool ok() const { return status == "converged"; }
};

std::string result_csv_header();
std::string result_csv_row(const ResultRow& row);
/// "1/4" for H = 0.25
std::string format_H(double H);

/// problem -> preconditioner -> PCG -> estimator replay -> bounds. Writes its
/// artifacts to @p dir. Never throws on solver trouble; the row says what happened.
ResultRow cmd_solve(const ExperimentConfig& config, const std::filesystem::path& dir);

/// Bound report for a spectrum file. ParseError propagates; a missing file or a
/// bad eps is a ConfigError.
BoundReport cmd_bound(const std::filesystem::path& spectrum_file, double eps,
                      AcceptanceRule rule = AcceptanceRule::lambert_exact);

/// Oracle spectrum of the configured preconditioned problem, written to @p out_file.
/// Throws std::length_error above the cap.
Spectrum cmd_spectrum(const ExperimentConfig& config, const std::filesystem::path& out_file);

struct SyntheticRow {
  std::string name;
  std::size_t n = 0;
  std::size_t s = 0;
  double kappa = 0.0;
  std::string status;
  std::size_t m = 0;
  long m1 = 0;
  long ms = 0;            ///< exact spectrum
  long ms_ritz = 0;       ///< converged Ritz values
  std::optional<long> ms_early;
  std::optional<std::size_t> i_early;
  bool verified = false;
};

/// Diagonal systems with known spectra, no PDE assembly.
std::vector<SyntheticRow> cmd_synth(const ExperimentConfig& config, const std::filesystem::path& dir);

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<SyntheticRow> synthetic;
  std::size_t failures = 0;
};

/// Runs every (H, coarse) cell, or the synthetic suite when configured, with up
/// to config.jobs cells in parallel. Writes table.csv, rows.csv, plot.csv and timing.csv.
SweepResult cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace pcgb
