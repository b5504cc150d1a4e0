#include "pcgbound/partition.hpp"

#include <cmath>
#include <stdexcept>

namespace pcgb {

SplitCandidate find_candidate(const Spectrum& spectrum)
{
  const std::size_t n = spectrum.size();
  if (n < 2)
    throw std::invalid_argument("find_candidate: need at least two eigenvalues");
  SplitCandidate c;
  c.split = 1;
  c.gap = spectrum[1] / spectrum[0];
  for (std::size_t i = 2; i < n; ++i) {
    const double ratio = spectrum[i] / spectrum[i - 1];
    if (ratio > c.gap) {
      c.gap = ratio;
      c.split = i;
    }
  }
  c.kappa = spectrum.back() / spectrum.front();
  c.kappa1 = spectrum[c.split - 1] / spectrum.front();
  c.kappa2 = spectrum.back() / spectrum[c.split];
  return c;
}

ThresholdTerms threshold_terms(double kappa1, double kappa2)
{
  if (!(kappa1 >= 1.0) || !(kappa2 >= 1.0))
    throw std::invalid_argument("threshold_terms: cluster condition numbers must be >= 1");
  ThresholdTerms t;
  const double root = std::sqrt(kappa2);
  t.x = -1.0 / (2.0 * root * std::exp(1.0 / root));
  t.L = std::log(-t.x);
  t.l = std::log(-t.L);
  t.w = lambert_w_minus1(t.x);
  const double series = t.L - t.l + t.l / t.L;
  t.expansion_threshold = 4.0 * kappa1 * kappa2 * series * series;
  t.exact_threshold = 4.0 * kappa1 * kappa2 * t.w * t.w;
  return t;
}

SplitDecision accept_split(const Spectrum& spectrum, const SplitCandidate& candidate, double eps,
                           AcceptanceRule rule)
{
  SplitDecision d;
  d.size = spectrum.size();
  d.candidate = candidate;
  d.terms = threshold_terms(candidate.kappa1, candidate.kappa2);
  d.m1 = m1(candidate.kappa, eps);
  d.m2 = m2(candidate.kappa, candidate.kappa1, candidate.kappa2, eps);
  // equal neighbours are never a split point
  const bool splittable = candidate.gap > 1.0;
  d.accept_exact = splittable && candidate.kappa > d.terms.exact_threshold;
  d.accept_expansion = splittable && candidate.kappa > d.terms.expansion_threshold;
  d.accept_direct = splittable && d.m2 < d.m1;
  switch (rule) {
    case AcceptanceRule::lambert_exact: d.accepted = d.accept_exact; break;
    case AcceptanceRule::expansion: d.accepted = d.accept_expansion; break;
    case AcceptanceRule::direct_bounds: d.accepted = d.accept_direct; break;
  }
  return d;
}

namespace {

void split_recursive(const Spectrum& spectrum, std::size_t lo, std::size_t hi, double eps, AcceptanceRule rule,
                     PartitionResult& out, std::vector<std::size_t>& bounds)
{
  if (hi - lo >= 2) {
    const auto sub = spectrum.slice(lo, hi);
    auto decision = accept_split(sub, find_candidate(sub), eps, rule);
    decision.offset = lo;
    const bool accepted = decision.accepted;
    const std::size_t mid = lo + decision.candidate.split;
    out.decisions.push_back(decision);
    if (accepted) {
      split_recursive(spectrum, lo, mid, eps, rule, out, bounds);
      split_recursive(spectrum, mid, hi, eps, rule, out, bounds);
      return;
    }
  }
  bounds.push_back(hi);
}

}  // namespace

PartitionResult greedy_partition(const Spectrum& spectrum, double eps, AcceptanceRule rule)
{
  if (spectrum.empty())
    throw std::invalid_argument("greedy_partition: empty spectrum");
  PartitionResult out;
  std::vector<std::size_t> bounds{0};
  split_recursive(spectrum, 0, spectrum.size(), eps, rule, out, bounds);
  out.partition = ClusterPartition(spectrum, std::move(bounds));
  return out;
}

}  // namespace pcgb
