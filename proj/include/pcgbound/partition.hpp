#pragma once

/** @file partition.hpp
    @brief Spectral cluster detection: largest-relative-gap split candidates, the
           Lambert-W acceptance threshold and the greedy recursive partition.
*/

#include <cstddef>
#include <vector>

#include "pcgbound/bounds.hpp"
#include "pcgbound/spectrum.hpp"

namespace pcgb {

/// Lower real branch W_{-1}(x) for x in [-1/e, 0): the solution w <= -1 of w e^w = x.
/// Throws std::domain_error outside the branch domain.
double lambert_w_minus1(double x);

/// Leading terms L - l + l/L of the x -> 0^- expansion, L = ln(-x), l = ln(-L).
double lambert_w_minus1_expansion(double x);

struct SplitCandidate {
  std::size_t split = 0;   ///< k*: number of eigenvalues in the lower part (1-based index)
  double gap = 1.0;        ///< lambda_{k*+1} / lambda_{k*}
  double kappa = 1.0;      ///< lambda_n / lambda_1
  double kappa1 = 1.0;     ///< lambda_{k*} / lambda_1
  double kappa2 = 1.0;     ///< lambda_n / lambda_{k*+1}
};

/// Largest consecutive ratio; ties go to the smallest index. Requires n >= 2.
SplitCandidate find_candidate(const Spectrum& spectrum);

struct ThresholdTerms {
  double x = 0.0;                     ///< -(2 sqrt(k2) exp(1/sqrt(k2)))^{-1}
  double L = 0.0;                     ///< ln(-x)
  double l = 0.0;                     ///< ln(-L)
  double w = 0.0;                     ///< W_{-1}(x)
  double expansion_threshold = 0.0;   ///< 4 k1 k2 (L - l + l/L)^2
  double exact_threshold = 0.0;       ///< 4 k1 k2 W_{-1}(x)^2
};

ThresholdTerms threshold_terms(double kappa1, double kappa2);

enum class AcceptanceRule {
  lambert_exact,  ///< kappa > 4 k1 k2 W_{-1}(x)^2 (default)
  expansion,      ///< kappa > 4 k1 k2 (L - l + l/L)^2
  direct_bounds,  ///< m2 < m1 evaluated directly
};

struct SplitDecision {
  std::size_t offset = 0;  ///< position of the subspectrum inside the full spectrum
  std::size_t size = 0;    ///< subspectrum length
  SplitCandidate candidate;
  ThresholdTerms terms;
  long m1 = 0;
  long m2 = 0;
  bool accept_exact = false;
  bool accept_expansion = false;
  bool accept_direct = false;
  bool accepted = false;  ///< according to the configured rule
};

SplitDecision accept_split(const Spectrum& spectrum, const SplitCandidate& candidate, double eps,
                           AcceptanceRule rule = AcceptanceRule::lambert_exact);

struct PartitionResult {
  ClusterPartition partition;
  std::vector<SplitDecision> decisions;  ///< in depth-first, lower-first order
};

/// Recursive splitting with subcluster-local condition numbers until every split
/// is rejected or the cluster is a singleton.
PartitionResult greedy_partition(const Spectrum& spectrum, double eps = 1e-8,
                                 AcceptanceRule rule = AcceptanceRule::lambert_exact);

}  // namespace pcgb
