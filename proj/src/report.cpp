#include "pcgbound/report.hpp"

#include <cmath>
#include <sstream>

#include "pcgbound/io.hpp"

namespace pcgb {

BoundReport compute_bound_report(const Spectrum& spectrum, double eps, AcceptanceRule rule)
{
  BoundReport r;
  r.eps = eps;
  r.n = spectrum.size();
  r.kappa = spectrum.condition_number();
  r.m1 = m1(r.kappa, eps);
  if (spectrum.size() >= 2) {
    const auto c = find_candidate(spectrum);
    r.m2 = m2(c.kappa, c.kappa1, c.kappa2, eps);
  }
  r.partition = greedy_partition(spectrum, eps, rule);
  r.polynomial = cluster_degrees(spectrum, r.partition.partition, eps);
  r.ms = ms(r.polynomial);
  for (const auto& I : r.polynomial.intervals)
    r.cluster_kappas.push_back(I.condition_number());
  r.check = verify_polynomial(spectrum, r.polynomial, eps);
  return r;
}

namespace {

// JSON has no infinities
nlohmann::json finite_or_null(double v)
{
  if (std::isfinite(v))
    return v;
  return nullptr;
}

}  // namespace

nlohmann::json partition_to_json(const Spectrum& spectrum, const PartitionResult& result)
{
  nlohmann::json j;
  j["indices"] = result.partition.indices();
  auto clusters = nlohmann::json::array();
  for (std::size_t i = 0; i < result.partition.clusters(); ++i) {
    const auto I = result.partition.interval(spectrum, i);
    clusters.push_back({I.lower, I.upper});
  }
  j["clusters"] = clusters;
  auto decisions = nlohmann::json::array();
  for (const auto& d : result.decisions) {
    decisions.push_back({
        {"offset", d.offset},
        {"size", d.size},
        {"split", d.offset + d.candidate.split},
        {"gap", d.candidate.gap},
        {"kappa", d.candidate.kappa},
        {"kappa1", d.candidate.kappa1},
        {"kappa2", d.candidate.kappa2},
        {"x", d.terms.x},
        {"L", d.terms.L},
        {"l", d.terms.l},
        {"w", d.terms.w},
        {"threshold_exact", d.terms.exact_threshold},
        {"threshold_expansion", d.terms.expansion_threshold},
        {"m1", d.m1},
        {"m2", d.m2},
        {"accept_exact", d.accept_exact},
        {"accept_expansion", d.accept_expansion},
        {"accept_direct", d.accept_direct},
        {"accepted", d.accepted},
    });
  }
  j["decisions"] = decisions;
  return j;
}

nlohmann::json to_json(const BoundReport& r)
{
  nlohmann::json j;
  j["eps"] = r.eps;
  j["n"] = r.n;
  j["kappa"] = r.kappa;
  j["m1"] = r.m1;
  j["m2"] = r.m2 ? nlohmann::json(*r.m2) : nlohmann::json(nullptr);
  j["ms"] = r.ms;
  j["s"] = r.polynomial.clusters();
  j["degrees"] = r.polynomial.degrees;
  j["cluster_kappas"] = r.cluster_kappas;
  // partition intervals are recomputed from the stored indices by readers; keep bounds explicit
  nlohmann::json part;
  part["indices"] = r.partition.partition.indices();
  auto clusters = nlohmann::json::array();
  for (const auto& I : r.polynomial.intervals)
    clusters.push_back({I.lower, I.upper});
  part["clusters"] = clusters;
  auto decisions = nlohmann::json::array();
  for (const auto& d : r.partition.decisions)
    decisions.push_back({{"offset", d.offset},
                         {"size", d.size},
                         {"split", d.offset + d.candidate.split},
                         {"gap", d.candidate.gap},
                         {"kappa", d.candidate.kappa},
                         {"kappa1", d.candidate.kappa1},
                         {"kappa2", d.candidate.kappa2},
                         {"threshold_exact", d.terms.exact_threshold},
                         {"threshold_expansion", d.terms.expansion_threshold},
                         {"m1", d.m1},
                         {"m2", d.m2},
                         {"accept_exact", d.accept_exact},
                         {"accept_expansion", d.accept_expansion},
                         {"accept_direct", d.accept_direct},
                         {"accepted", d.accepted}});
  part["decisions"] = decisions;
  j["partition"] = part;
  j["verification"] = {{"max_log_abs", finite_or_null(r.check.max_log_abs)},
                       {"log_eps", std::log(r.eps)},
                       {"edges_pass", r.check.edges_pass},
                       {"passed", r.check.passed}};
  return j;
}

std::string bound_report_csv_header() { return "n,kappa,s,m1,m2,ms,verified"; }

std::string bound_report_csv_row(const BoundReport& r)
{
  std::ostringstream os;
  os << r.n << ',' << format_double(r.kappa) << ',' << r.polynomial.clusters() << ',' << r.m1 << ',';
  if (r.m2)
    os << *r.m2;
  os << ',' << r.ms << ',' << (r.check.passed ? 1 : 0);
  return os.str();
}

}  // namespace pcgb
