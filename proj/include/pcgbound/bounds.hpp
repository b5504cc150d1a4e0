#pragma once

/** @file bounds.hpp
    @brief Chebyshev machinery for PCG iteration bounds on clustered spectra.

    A spectrum split into clusters I_1 < ... < I_s is bounded by the product of
    scaled Chebyshev polynomials r_s(lambda) = prod_i C_{p_i}(T_i(lambda)) / C_{p_i}(T_i(0)),
    where T_i maps I_i affinely onto [-1, 1]. The degrees p_i are chosen cluster by
    cluster from the lowest one up so that |r_i| < eps holds at the upper edge of every
    cluster; the total degree m_s = sum p_i bounds the number of CG iterations needed
    to reduce the A-norm error by eps. All magnitudes are handled as natural
    logarithms so spectra with condition numbers far beyond 1e8 do not overflow.
*/

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "pcgbound/spectrum.hpp"

namespace pcgb {

struct Interval {
  double lower;
  double upper;

  bool degenerate() const { return upper == lower; }
  /// upper / lower
  double condition_number() const { return upper / lower; }
};

/// Cluster boundaries k_0 = 0 < k_1 < ... < k_s = n; cluster i (0-based) holds
/// eigenvalues [k_i, k_{i+1}).
class ClusterPartition {
 public:
  ClusterPartition() = default;
  /// Checks strict monotonicity, k_0 = 0 and k_s = n, and that neighbouring
  /// clusters do not share an eigenvalue value.
  ClusterPartition(const Spectrum& spectrum, std::vector<std::size_t> indices);

  static ClusterPartition single(const Spectrum& spectrum);
  static ClusterPartition singletons(const Spectrum& spectrum);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t clusters() const { return indices_.empty() ? 0 : indices_.size() - 1; }
  std::size_t begin(std::size_t cluster) const { return indices_[cluster]; }
  std::size_t end(std::size_t cluster) const { return indices_[cluster + 1]; }

  Interval interval(const Spectrum& spectrum, std::size_t cluster) const
  {
    return {spectrum[begin(cluster)], spectrum[end(cluster) - 1]};
  }

  friend bool operator==(const ClusterPartition&, const ClusterPartition&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// T(lambda) = (2 lambda - (lower + upper)) / (upper - lower); lower edge -> -1, upper -> +1.
double affine_map(Interval interval, double lambda);

/// ln |C_q(x)| for the Chebyshev polynomial of the first kind; -inf at a root.
double log_abs_chebyshev(unsigned q, double x);

/**
 * ln |C_q(T(lambda)) / C_q(T(0))|; exactly 0 at lambda = 0 and for q = 0.
 * For a degenerate interval [mu, mu] the factor is the linear (1 - lambda/mu)^q.
 */
double log_abs_scaled_cheb(Interval interval, unsigned q, double lambda);

/// Classical bound floor(sqrt(kappa)/2 ln(2/eps) + 1).
long m1(double kappa, double eps);

/// Two-cluster bound
/// floor(1 + sqrt(k2)/2 ln(4k/k1) + 1/2 ln(2/eps) (sqrt(k1) + sqrt(k2) + sqrt(k1 k2)/2 ln(4k/k1))).
long m2(double kappa, double kappa1, double kappa2, double eps);

struct ClusterPolynomial {
  ClusterPartition partition;
  std::vector<Interval> intervals;
  std::vector<long> degrees;

  long total_degree() const;
  std::size_t clusters() const { return degrees.size(); }
  /// ln |r_s(lambda)|
  double log_abs(double lambda) const;
};

/**
 * Degrees p_1..p_s in cluster order. With gamma_i = (sqrt(k_i) - 1) / (sqrt(k_i) + 1),
 *
 *   p_i = ceil( (ln(2/eps) + sum_{j<i} g_j(lambda_{k_i})) / ln(1/gamma_i) ),
 *
 * where g_j(lambda) = p_j max(0, ln(gamma_j (T_j + sqrt(T_j^2 - 1)))) at T_j = T_j(lambda)
 * bounds the growth of the lower cluster's factor above its interval. A singleton
 * cluster gets degree 1 and contributes its exact factor ln|1 - lambda/mu|.
 */
ClusterPolynomial cluster_degrees(const Spectrum& spectrum, const ClusterPartition& partition, double eps);

/// Total degree m_s.
long ms(const ClusterPolynomial& poly);

struct PolynomialCheck {
  double max_log_abs = -std::numeric_limits<double>::infinity();  ///< over all eigenvalues
  std::size_t argmax = 0;
  std::vector<double> edge_log_abs;  ///< ln |prod_{j<=i} factor_j(lambda_{k_i})| per cluster
  bool edges_pass = true;
  bool passed = true;
};

/// Pass iff max ln|r_s| over the spectrum < ln(eps) + 1e-10 and the cluster-edge
/// conditions hold.
PolynomialCheck verify_polynomial(const Spectrum& spectrum, const ClusterPolynomial& poly, double eps);

}  // namespace pcgb
