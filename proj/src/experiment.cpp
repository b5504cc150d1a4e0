#include "pcgbound/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pcgbound/io.hpp"
#include "pcgbound/oracle.hpp"

namespace pcgb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
  if (!j.is_object())
    throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
  if (!j.contains(key))
    return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

CoarseKind coarse_from(const std::string& name, const std::string& where)
{
  try {
    return parse_coarse_kind(name);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void parse_problem(const json& j, ProblemConfig& p)
{
  const std::string w = "problem";
  reject_unknown(j, {"H", "H_over_h", "contrast", "background", "inclusions_per_edge", "channel_half_length",
                     "channel_width", "f", "dirichlet"},
                 w);
  read(j, "H", p.H, w);
  read(j, "H_over_h", p.H_over_h, w);
  read(j, "contrast", p.pattern.contrast, w);
  read(j, "background", p.pattern.background, w);
  read(j, "inclusions_per_edge", p.pattern.inclusions_per_edge, w);
  read(j, "channel_half_length", p.pattern.channel_half_length, w);
  read(j, "channel_width", p.pattern.channel_width, w);
  read(j, "f", p.load.f, w);
  read(j, "dirichlet", p.load.dirichlet, w);
}

void parse_preconditioner(const json& j, PreconditionerConfig& p)
{
  const std::string w = "preconditioner";
  reject_unknown(j, {"coarse", "overlap"}, w);
  std::string coarse = to_string(p.coarse);
  read(j, "coarse", coarse, w);
  p.coarse = coarse_from(coarse, w);
  read(j, "overlap", p.overlap, w);
}

void parse_stop(const json& j, StopRule& s)
{
  const std::string w = "stop";
  reject_unknown(j, {"mode", "tolerance", "max_iterations"}, w);
  std::string mode = to_string(s.mode);
  read(j, "mode", mode, w);
  try {
    s.mode = parse_stop_mode(mode);
  } catch (const std::exception& e) {
    throw ConfigError(w + ": " + e.what());
  }
  read(j, "tolerance", s.tolerance, w);
  read(j, "max_iterations", s.max_iterations, w);
}

void parse_estimator(const json& j, EstimatorConfig& e)
{
  const std::string w = "estimator";
  reject_unknown(j, {"check_period", "tolerance", "max_iterations", "run_fraction", "edges"}, w);
  read(j, "check_period", e.check_period, w);
  read(j, "tolerance", e.tolerance, w);
  read(j, "max_iterations", e.max_iterations, w);
  read(j, "run_fraction", e.run_fraction, w);
  if (j.contains("edges")) {
    std::string name;
    read(j, "edges", name, w);
    if (name == "all")
      e.edges = EdgeSet::all_endpoints;
    else if (name == "boundaries")
      e.edges = EdgeSet::boundaries;
    else
      throw ConfigError("estimator.edges must be \"all\" or \"boundaries\"");
  }
}

SweepConfig parse_sweep(const json& j)
{
  const std::string w = "sweep";
  reject_unknown(j, {"H", "coarse"}, w);
  SweepConfig s;
  read(j, "H", s.H, w);
  if (j.contains("coarse")) {
    std::vector<std::string> names;
    read(j, "coarse", names, w);
    s.coarse.clear();
    for (const auto& n : names)
      s.coarse.push_back(coarse_from(n, w));
  }
  return s;
}

SyntheticConfig parse_synthetic(const json& j, const fs::path& base)
{
  const std::string w = "synthetic";
  reject_unknown(j, {"spectra", "random_count", "max_clusters", "max_size", "max_kappa", "max_cluster_kappa"}, w);
  SyntheticConfig s;
  std::vector<std::string> files;
  read(j, "spectra", files, w);
  for (const auto& f : files) {
    fs::path p(f);
    s.spectra.push_back(p.is_relative() && !base.empty() ? base / p : p);
  }
  read(j, "random_count", s.random_count, w);
  read(j, "max_clusters", s.limits.max_clusters, w);
  read(j, "max_size", s.limits.max_size, w);
  read(j, "max_kappa", s.limits.max_kappa, w);
  read(j, "max_cluster_kappa", s.limits.max_cluster_kappa, w);
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir)
{
  reject_unknown(j, {"problem", "preconditioner", "stop", "estimator", "sweep", "synthetic", "eps", "oracle_cap",
                     "seed", "output", "jobs"},
                 "config");
  ExperimentConfig c;
  if (j.contains("problem"))
    parse_problem(j.at("problem"), c.problem);
  if (j.contains("preconditioner"))
    parse_preconditioner(j.at("preconditioner"), c.preconditioner);
  if (j.contains("stop"))
    parse_stop(j.at("stop"), c.stop);
  if (j.contains("estimator"))
    parse_estimator(j.at("estimator"), c.estimator);
  if (j.contains("sweep"))
    c.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("synthetic"))
    c.synthetic = parse_synthetic(j.at("synthetic"), base_dir);
  read(j, "eps", c.eps, "config");
  read(j, "oracle_cap", c.oracle_cap, "config");
  read(j, "seed", c.seed, "config");
  std::string out = c.output.string();
  read(j, "output", out, "config");
  c.output = out;
  read(j, "jobs", c.jobs, "config");
  c.estimator.eps = c.eps;
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json ExperimentConfig::to_json() const
{
  json j;
  j["problem"] = {{"H", problem.H},
                  {"H_over_h", problem.H_over_h},
                  {"contrast", problem.pattern.contrast},
                  {"background", problem.pattern.background},
                  {"inclusions_per_edge", problem.pattern.inclusions_per_edge},
                  {"channel_half_length", problem.pattern.channel_half_length},
                  {"channel_width", problem.pattern.channel_width},
                  {"f", problem.load.f},
                  {"dirichlet", problem.load.dirichlet}};
  j["preconditioner"] = {{"coarse", to_string(preconditioner.coarse)}, {"overlap", preconditioner.overlap}};
  j["stop"] = {{"mode", to_string(stop.mode)}, {"tolerance", stop.tolerance}, {"max_iterations", stop.max_iterations}};
  j["estimator"] = {{"check_period", estimator.check_period},
                    {"tolerance", estimator.tolerance},
                    {"max_iterations", estimator.max_iterations},
                    {"run_fraction", estimator.run_fraction},
                    {"edges", estimator.edges == EdgeSet::boundaries ? "boundaries" : "all"}};
  if (sweep) {
    std::vector<std::string> names;
    for (auto k : sweep->coarse)
      names.push_back(to_string(k));
    j["sweep"] = {{"H", sweep->H}, {"coarse", names}};
  }
  if (synthetic) {
    std::vector<std::string> files;
    for (const auto& p : synthetic->spectra)
      files.push_back(p.string());
    j["synthetic"] = {{"spectra", files},
                      {"random_count", synthetic->random_count},
                      {"max_clusters", synthetic->limits.max_clusters},
                      {"max_size", synthetic->limits.max_size},
                      {"max_kappa", synthetic->limits.max_kappa},
                      {"max_cluster_kappa", synthetic->limits.max_cluster_kappa}};
  }
  j["eps"] = eps;
  j["oracle_cap"] = oracle_cap;
  j["seed"] = seed;
  j["output"] = output.string();
  j["jobs"] = jobs;
  return j;
}

void ExperimentConfig::validate() const
{
  try {
    stop.validate();
    estimator.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(eps > 0.0 && eps < 1.0))
    throw ConfigError("eps must lie in (0, 1)");
  if (jobs == 0)
    throw ConfigError("jobs must be >= 1");
  if (problem.H_over_h < 1)
    throw ConfigError("problem.H_over_h must be >= 1");
  if (preconditioner.overlap < 0 || preconditioner.overlap > problem.H_over_h)
    throw ConfigError("preconditioner.overlap must lie in [0, H_over_h]");
  if (!(problem.pattern.contrast > 0.0) || !(problem.pattern.background > 0.0))
    throw ConfigError("problem coefficients must be positive");
  if (synthetic && synthetic->limits.max_clusters < 1)
    throw ConfigError("synthetic.max_clusters must be >= 1");
}

std::string format_H(double H)
{
  const double inv = 1.0 / H;
  const double r = std::round(inv);
  if (std::abs(inv - r) <= 1e-9 * r)
    return "1/" + std::to_string(static_cast<long>(r));
  return format_double(H);
}

std::string result_csv_header() { return "H,coarse,n,status,m,m1,ms,ms_early,i_early,kappa,kappa_source,s"; }

namespace {

template <class T>
std::string opt_str(const std::optional<T>& v)
{
  return v ? std::to_string(*v) : std::string();
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string result_csv_row(const ResultRow& r)
{
  std::ostringstream os;
  os << format_H(r.H) << ',' << to_string(r.coarse) << ',' << r.n << ',' << csv_field(r.status) << ',' << r.m << ','
     << r.m1 << ',' << r.ms_converged << ',' << opt_str(r.ms_early) << ',' << opt_str(r.i_early) << ','
     << format_double(r.kappa) << ',' << r.kappa_source << ',' << r.s;
  return os.str();
}

namespace {

struct Pipeline {
  DiscreteProblem problem;
  SchwarzPreconditioner M;
};

Pipeline build_pipeline(const ExperimentConfig& config)
{
  const auto grid = GridSpec::from_H(config.problem.H, config.problem.H_over_h);
  const auto& pat = config.problem.pattern;
  const auto field =
      pat.contrast == pat.background ? constant_field(grid, pat.background) : build_coefficient_field(grid, pat);
  auto problem = assemble(grid, field, config.problem.load);
  const auto dd = decompose(grid, config.preconditioner.overlap);
  auto M = SchwarzPreconditioner::assemble(problem.A, dd, config.preconditioner.coarse);
  return {std::move(problem), std::move(M)};
}

LinearOperator as_operator(const SchwarzPreconditioner& M)
{
  return [&M](std::span<const double> r, std::span<double> z) { M.apply(r, z); };
}

std::string to_text(const auto& writer)
{
  std::ostringstream os;
  writer(os);
  return os.str();
}

}  // namespace

ResultRow cmd_solve(const ExperimentConfig& config, const fs::path& dir)
{
  const auto t0 = std::chrono::steady_clock::now();
  ResultRow row;
  row.H = config.problem.H;
  row.coarse = config.preconditioner.coarse;
  try {
    const Pipeline pipe = build_pipeline(config);
    const auto& A = pipe.problem.A;
    row.n = A.rows();

    PCGOptions opt;
    opt.stop = config.stop;
    opt.preconditioner = as_operator(pipe.M);
    if (config.stop.mode == StopMode::energy_error)
      opt.reference = direct_solve(pipe.problem);
    const CGResult result = pcg(A, pipe.problem.b, opt);
    row.status = to_string(result.status);
    row.m = result.trace.iterations();
    write_file_atomic(dir / "trace.csv", to_text([&](std::ostream& os) { result.trace.write_csv(os); }));

    EstimatorConfig ec = config.estimator;
    ec.eps = config.eps;
    const RitzEstimator est = replay_estimator(ec, result.trace);
    write_file_atomic(dir / "estimator.jsonl", to_text([&](std::ostream& os) { est.write_events(os); }));
    const ComparisonRecord rec = final_report(est, result);
    row.ms_converged = rec.ms_converged;
    row.s = rec.s_converged;
    row.kappa = rec.kappa_ritz;
    row.m1 = rec.m1;
    row.kappa_source = "ritz";
    if (rec.early) {
      row.ms_early = rec.early->ms;
      row.i_early = rec.early->iteration;
    }

    if (row.m > 0) {
      const Spectrum ritz = ritz_values(result.trace);
      write_file_atomic(dir / "ritz.txt", to_text([&](std::ostream& os) { write_spectrum(os, ritz); }));
      write_file_atomic(dir / "bound_ritz.json", to_json(compute_bound_report(ritz, config.eps)).dump(2) + "\n");
    }
    if (row.n <= config.oracle_cap) {
      const Spectrum oracle = preconditioned_spectrum(A, opt.preconditioner, config.oracle_cap);
      write_file_atomic(dir / "oracle.txt", to_text([&](std::ostream& os) { write_spectrum(os, oracle); }));
      write_file_atomic(dir / "bound_oracle.json", to_json(compute_bound_report(oracle, config.eps)).dump(2) + "\n");
      row.kappa = oracle.condition_number();
      row.m1 = m1(row.kappa, config.eps);
      row.kappa_source = "oracle";
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_file_atomic(dir / "row.csv", result_csv_header() + "\n" + result_csv_row(row) + "\n");
  } catch (const std::exception& e) {
    if (row.ok())
      row.status = std::string("error: ") + e.what();
  }
  return row;
}

BoundReport cmd_bound(const fs::path& spectrum_file, double eps, AcceptanceRule rule)
{
  if (!fs::is_regular_file(spectrum_file))
    throw ConfigError("cannot open spectrum file " + spectrum_file.string());
  if (!(eps > 0.0 && eps < 1.0))
    throw ConfigError("eps must lie in (0, 1)");
  return compute_bound_report(read_spectrum(spectrum_file), eps, rule);
}

Spectrum cmd_spectrum(const ExperimentConfig& config, const fs::path& out_file)
{
  const auto grid = GridSpec::from_H(config.problem.H, config.problem.H_over_h);
  if (grid.unknowns() > config.oracle_cap)
    throw std::length_error("oracle: n = " + std::to_string(grid.unknowns()) + " exceeds the dense cap " +
                            std::to_string(config.oracle_cap) + "; run 'solve' and use the Ritz values instead");
  const Pipeline pipe = build_pipeline(config);
  const Spectrum s = preconditioned_spectrum(pipe.problem.A, as_operator(pipe.M), config.oracle_cap);
  write_file_atomic(out_file, to_text([&](std::ostream& os) { write_spectrum(os, s); }));
  return s;
}

namespace {

std::string synthetic_csv_header() { return "case,n,s,kappa,status,m,m1,ms,ms_ritz,ms_early,i_early,verified"; }

std::string synthetic_csv_row(const SyntheticRow& r)
{
  std::ostringstream os;
  os << csv_field(r.name) << ',' << r.n << ',' << r.s << ',' << format_double(r.kappa) << ',' << r.status << ','
     << r.m << ',' << r.m1 << ',' << r.ms << ',' << r.ms_ritz << ',' << opt_str(r.ms_early) << ','
     << opt_str(r.i_early) << ',' << (r.verified ? 1 : 0);
  return os.str();
}

}  // namespace

std::vector<SyntheticRow> cmd_synth(const ExperimentConfig& config, const fs::path& dir)
{
  const SyntheticConfig syn = config.synthetic.value_or(SyntheticConfig{});
  std::mt19937_64 rng(config.seed);

  std::vector<std::pair<std::string, Spectrum>> cases;
  for (const auto& file : syn.spectra)
    cases.emplace_back(file.filename().string(), read_spectrum(file));
  for (std::size_t k = 0; k < syn.random_count; ++k) {
    const auto clusters = random_clusters(rng, syn.limits);
    cases.emplace_back("random_" + std::to_string(k), clustered_spectrum(clusters, rng));
  }

  std::vector<SyntheticRow> rows;
  std::string csv = synthetic_csv_header() + "\n";
  for (const auto& [name, spectrum] : cases) {
    SyntheticRow row;
    row.name = name;
    row.n = spectrum.size();
    row.kappa = spectrum.condition_number();
    try {
      const auto sys = diagonal_system(spectrum, rng);
      const CGResult result = solve_diagonal(sys, config.eps, {}, config.stop.max_iterations);
      row.status = to_string(result.status);
      row.m = result.trace.iterations();
      const auto report = compute_bound_report(spectrum, config.eps);
      row.s = report.polynomial.clusters();
      row.m1 = report.m1;
      row.ms = report.ms;
      row.verified = report.check.passed;
      EstimatorConfig ec = config.estimator;
      ec.eps = config.eps;
      const auto est = replay_estimator(ec, result.trace);
      const auto rec = final_report(est, result);
      row.ms_ritz = rec.ms_converged;
      if (rec.early) {
        row.ms_early = rec.early->ms;
        row.i_early = rec.early->iteration;
      }
      if (!syn.spectra.empty() || syn.random_count > 0)
        write_file_atomic(dir / "spectra" / (name + ".txt"),
                          to_text([&](std::ostream& os) { write_spectrum(os, spectrum); }));
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    csv += synthetic_csv_row(row) + "\n";
    rows.push_back(std::move(row));
  }
  write_file_atomic(dir / "synth.csv", csv);
  return rows;
}

SweepResult cmd_sweep(const ExperimentConfig& config, const fs::path& dir)
{
  SweepResult out;
  if (config.synthetic) {
    out.synthetic = cmd_synth(config, dir);
    for (const auto& r : out.synthetic)
      if (r.status != "converged")
        ++out.failures;
    return out;
  }

  struct Cell {
    double H;
    CoarseKind coarse;
  };
  std::vector<Cell> cells;
  if (config.sweep)
    for (double H : config.sweep->H)
      for (CoarseKind k : config.sweep->coarse)
        cells.push_back({H, k});

  out.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      ExperimentConfig cell = config;
      cell.problem.H = cells[c].H;
      cell.preconditioner.coarse = cells[c].coarse;
      std::string label = format_H(cells[c].H);
      for (auto& ch : label)
        if (ch == '/')
          ch = '_';
      out.rows[c] = cmd_solve(cell, dir / ("H" + label + "_" + to_string(cells[c].coarse)));
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();

  for (const auto& r : out.rows)
    if (!r.ok())
      ++out.failures;

  // one column per cell, one line per quantity
  std::ostringstream table, rows, plot, timing;
  table << "quantity";
  for (const auto& r : out.rows)
    table << ',' << format_H(r.H) << ' ' << to_string(r.coarse);
  table << '\n';
  auto line = [&](const char* name, auto get) {
    table << name;
    for (const auto& r : out.rows)
      table << ',' << get(r);
    table << '\n';
  };
  if (!out.rows.empty()) {
    line("n", [](const ResultRow& r) { return std::to_string(r.n); });
    line("m", [](const ResultRow& r) { return std::to_string(r.m); });
    line("m1", [](const ResultRow& r) { return std::to_string(r.m1); });
    line("ms", [](const ResultRow& r) { return std::to_string(r.ms_converged); });
    line("ms_early", [](const ResultRow& r) { return opt_str(r.ms_early); });
    line("i_early", [](const ResultRow& r) { return opt_str(r.i_early); });
    line("kappa", [](const ResultRow& r) { return format_double(r.kappa); });
    line("s", [](const ResultRow& r) { return std::to_string(r.s); });
    line("status", [](const ResultRow& r) { return csv_field(r.status); });
  }

  rows << result_csv_header() << '\n';
  plot << "H,coarse,m,m1,ms\n";
  timing << "H,coarse,wall_seconds\n";
  for (const auto& r : out.rows) {
    rows << result_csv_row(r) << '\n';
    plot << format_double(r.H) << ',' << to_string(r.coarse) << ',' << r.m << ',' << r.m1 << ',' << r.ms_converged
         << '\n';
    timing << format_H(r.H) << ',' << to_string(r.coarse) << ',' << format_double(r.wall_seconds) << '\n';
  }
  write_file_atomic(dir / "table.csv", table.str());
  write_file_atomic(dir / "rows.csv", rows.str());
  write_file_atomic(dir / "plot.csv", plot.str());
  write_file_atomic(dir / "timing.csv", timing.str());
  return out;
}

}  // namespace pcgb
