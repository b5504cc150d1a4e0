// Command line driver: solve, sweep, bound, spectrum, synth.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcgbound/experiment.hpp"
#include "pcgbound/io.hpp"

namespace fs = std::filesystem;
using namespace pcgb;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<std::size_t> oracle_cap;
  std::string mode;
  std::optional<unsigned> jobs;
};

void add_common(CLI::App* cmd, Common& c, bool with_config)
{
  if (with_config)
    cmd->add_option("--config", c.config, "experiment configuration (JSON)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--eps", c.eps, "tolerance epsilon");
  cmd->add_option("--oracle-cap", c.oracle_cap, "largest n for the dense oracle spectrum");
  cmd->add_option("--mode", c.mode, "stopping rule")->check(CLI::IsMember({"residual", "anorm"}));
  cmd->add_option("--jobs", c.jobs, "parallel sweep cells");
}

ExperimentConfig resolve(const Common& c)
{
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig::from_json(nlohmann::json::object())
                                          : ExperimentConfig::load(c.config);
  if (!c.out.empty())
    cfg.output = c.out;
  if (c.seed)
    cfg.seed = *c.seed;
  if (c.eps) {
    cfg.eps = *c.eps;
    cfg.estimator.eps = *c.eps;
    cfg.stop.tolerance = *c.eps;
  }
  if (c.oracle_cap)
    cfg.oracle_cap = *c.oracle_cap;
  if (!c.mode.empty())
    cfg.stop.mode = parse_stop_mode(c.mode);
  if (c.jobs)
    cfg.jobs = *c.jobs;
  cfg.validate();
  return cfg;
}

int run_solve(const Common& c)
{
  const auto cfg = resolve(c);
  const auto row = cmd_solve(cfg, cfg.output);
  std::cout << result_csv_header() << '\n' << result_csv_row(row) << '\n';
  return row.ok() ? 0 : 1;
}

int run_sweep(const Common& c)
{
  const auto cfg = resolve(c);
  const auto res = cmd_sweep(cfg, cfg.output);
  std::cout << "cells: " << (res.rows.size() + res.synthetic.size()) << ", failures: " << res.failures
            << ", output: " << cfg.output.string() << '\n';
  return res.failures == 0 ? 0 : 1;
}

int run_bound(const Common& c, const std::string& file, const std::string& rule_name, bool csv)
{
  AcceptanceRule rule = AcceptanceRule::lambert_exact;
  if (rule_name == "expansion")
    rule = AcceptanceRule::expansion;
  else if (rule_name == "direct")
    rule = AcceptanceRule::direct_bounds;
  const auto report = cmd_bound(file, c.eps.value_or(1e-8), rule);
  const std::string json = to_json(report).dump(2) + "\n";
  if (!c.out.empty()) {
    write_file_atomic(fs::path(c.out) / "bound.json", json);
    write_file_atomic(fs::path(c.out) / "bound.csv",
                      bound_report_csv_header() + "\n" + bound_report_csv_row(report) + "\n");
  }
  if (csv)
    std::cout << bound_report_csv_header() << '\n' << bound_report_csv_row(report) << '\n';
  else
    std::cout << json;
  return 0;
}

int run_spectrum(const Common& c)
{
  const auto cfg = resolve(c);
  const auto s = cmd_spectrum(cfg, cfg.output / "oracle.txt");
  std::cout << "n = " << s.size() << ", lambda_min = " << format_double(s.front())
            << ", lambda_max = " << format_double(s.back()) << ", written to " << (cfg.output / "oracle.txt").string()
            << '\n';
  return 0;
}

int run_synth(const Common& c, std::optional<std::size_t> count)
{
  auto cfg = resolve(c);
  if (!cfg.synthetic)
    cfg.synthetic = SyntheticConfig{};
  if (count)
    cfg.synthetic->random_count = *count;
  const auto rows = cmd_synth(cfg, cfg.output);
  std::size_t unsound = 0, failed = 0;
  for (const auto& r : rows) {
    if (r.status != "converged")
      ++failed;
    else if (static_cast<long>(r.m) > r.ms)
      ++unsound;
  }
  std::cout << "cases: " << rows.size() << ", m > ms: " << unsound << ", failures: " << failed
            << ", output: " << (cfg.output / "synth.csv").string() << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"PCG iteration bounds for clustered spectra"};
  app.require_subcommand(1);

  Common solve_opts, sweep_opts, bound_opts, spectrum_opts, synth_opts;
  auto* solve = app.add_subcommand("solve", "assemble, precondition, solve and bound one problem");
  add_common(solve, solve_opts, true);
  auto* sweep = app.add_subcommand("sweep", "run every (H, coarse space) cell or the synthetic suite");
  add_common(sweep, sweep_opts, true);
  sweep->get_option("--config")->required();

  auto* bound = app.add_subcommand("bound", "bounds for a spectrum file");
  add_common(bound, bound_opts, false);
  std::string spectrum_file, rule = "exact";
  bool bound_csv = false;
  bound->add_option("spectrum", spectrum_file, "ascending eigenvalues, one per line")->required();
  bound->add_option("--rule", rule, "split acceptance rule")->check(CLI::IsMember({"exact", "expansion", "direct"}));
  bound->add_flag("--csv", bound_csv, "print the CSV row instead of JSON");

  auto* spectrum = app.add_subcommand("spectrum", "dense oracle spectrum of the preconditioned operator");
  add_common(spectrum, spectrum_opts, true);

  auto* synth = app.add_subcommand("synth", "diagonal systems with known clustered spectra");
  add_common(synth, synth_opts, true);
  std::optional<std::size_t> count;
  synth->add_option("--count", count, "random spectra to generate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve)
      return run_solve(solve_opts);
    if (*sweep)
      return run_sweep(sweep_opts);
    if (*bound)
      return run_bound(bound_opts, spectrum_file, rule, bound_csv);
    if (*spectrum)
      return run_spectrum(spectrum_opts);
    if (*synth)
      return run_synth(synth_opts, count);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
