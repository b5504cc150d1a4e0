#include "pcgbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pcgb {

ClusterPartition::ClusterPartition(const Spectrum& spectrum, std::vector<std::size_t> indices)
    : indices_(std::move(indices))
{
  if (indices_.size() < 2 || indices_.front() != 0 || indices_.back() != spectrum.size())
    throw std::invalid_argument("ClusterPartition: indices must run from 0 to n");
  for (std::size_t i = 1; i < indices_.size(); ++i) {
    if (indices_[i] <= indices_[i - 1])
      throw std::invalid_argument("ClusterPartition: indices must be strictly increasing");
    if (i + 1 < indices_.size() && !(spectrum[indices_[i] - 1] < spectrum[indices_[i]]))
      throw std::invalid_argument("ClusterPartition: clusters " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " overlap");
  }
}

ClusterPartition ClusterPartition::single(const Spectrum& spectrum)
{
  return ClusterPartition(spectrum, {0, spectrum.size()});
}

ClusterPartition ClusterPartition::singletons(const Spectrum& spectrum)
{
  std::vector<std::size_t> idx{0};
  for (std::size_t i = 1; i < spectrum.size(); ++i)
    if (spectrum[i] > spectrum[i - 1])
      idx.push_back(i);
  idx.push_back(spectrum.size());
  return ClusterPartition(spectrum, std::move(idx));
}

double affine_map(Interval interval, double lambda)
{
  return (2.0 * lambda - (interval.lower + interval.upper)) / (interval.upper - interval.lower);
}

namespace {

// ln cosh(y) = y + ln(1 + e^{-2y}) - ln 2
double log_cosh(double y)
{
  return y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
}

// arcosh(1 + d) without forming 1 + d, which loses the digits of small d
double acosh1p(double d)
{
  return std::log1p(d + std::sqrt(d * (2.0 + d)));
}

// |T(lambda)| - 1 for lambda outside the interval, from the nearer edge
double excess(Interval I, double lambda)
{
  const double w = I.upper - I.lower;
  return lambda < I.lower ? 2.0 * (I.lower - lambda) / w : 2.0 * (lambda - I.upper) / w;
}

}  // namespace

double log_abs_chebyshev(unsigned q, double x)
{
  if (q == 0)
    return 0.0;
  const double ax = std::abs(x);
  if (ax <= 1.0) {
    double c;
    if (q <= 64) {
      // exact roots stay exact in the recurrence (e.g. C_3(0) = 0)
      double prev = 1.0;
      c = x;
      for (unsigned k = 1; k < q; ++k) {
        const double next = 2.0 * x * c - prev;
        prev = c;
        c = next;
      }
    } else {
      c = std::cos(q * std::acos(x));
    }
    return std::log(std::abs(c));
  }
  // |C_q(x)| = cosh(q t), t = arcosh|x|
  return log_cosh(q * std::acosh(ax));
}

double log_abs_scaled_cheb(Interval interval, unsigned q, double lambda)
{
  if (q == 0)
    return 0.0;
  if (interval.degenerate())
    return q * std::log(std::abs(1.0 - lambda / interval.lower));
  const double at_zero = log_cosh(q * acosh1p(excess(interval, 0.0)));
  if (lambda >= interval.lower && lambda <= interval.upper)
    return log_abs_chebyshev(q, affine_map(interval, lambda)) - at_zero;
  return log_cosh(q * acosh1p(excess(interval, lambda))) - at_zero;
}

long m1(double kappa, double eps)
{
  if (!(kappa >= 1.0) || !(eps > 0.0))
    throw std::invalid_argument("m1: need kappa >= 1 and eps > 0");
  return static_cast<long>(std::floor(std::sqrt(kappa) / 2.0 * std::log(2.0 / eps) + 1.0));
}

long m2(double kappa, double kappa1, double kappa2, double eps)
{
  if (!(kappa1 >= 1.0) || !(kappa2 >= 1.0) || !(eps > 0.0))
    throw std::invalid_argument("m2: need kappa1, kappa2 >= 1 and eps > 0");
  const double lk = std::log(4.0 * kappa / kappa1);
  const double s1 = std::sqrt(kappa1);
  const double s2 = std::sqrt(kappa2);
  const double value = 1.0 + s2 / 2.0 * lk + 0.5 * std::log(2.0 / eps) * (s1 + s2 + s1 * s2 / 2.0 * lk);
  return static_cast<long>(std::floor(value));
}

long ClusterPolynomial::total_degree() const { return std::accumulate(degrees.begin(), degrees.end(), 0L); }

double ClusterPolynomial::log_abs(double lambda) const
{
  double acc = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    acc += log_abs_scaled_cheb(intervals[i], static_cast<unsigned>(degrees[i]), lambda);
  return acc;
}

namespace {

// ln(1/gamma) for gamma = (sqrt(k) - 1)/(sqrt(k) + 1), k = upper/lower, without
// cancellation in sqrt(k) - 1 for tight clusters.
double log_inverse_gamma(Interval I)
{
  const double root = std::sqrt(I.condition_number());
  const double km1 = (I.upper - I.lower) / I.lower;
  return 2.0 * std::log1p(root) - std::log(km1);
}

// Upper bound for ln|factor_j(lambda)| at a point above cluster j.
double log_growth_above(Interval I, long degree, double lambda)
{
  if (degree == 0)
    return 0.0;
  if (I.degenerate())
    return static_cast<double>(degree) * std::log(std::abs(1.0 - lambda / I.lower));
  if (lambda < I.upper)
    throw std::logic_error("cluster_degrees: evaluation point lies below the cluster's upper edge");
  const double log_rho = acosh1p(excess(I, lambda));
  return static_cast<double>(degree) * std::max(0.0, log_rho - log_inverse_gamma(I));
}

}  // namespace

ClusterPolynomial cluster_degrees(const Spectrum& spectrum, const ClusterPartition& partition, double eps)
{
  if (!(eps > 0.0))
    throw std::invalid_argument("cluster_degrees: eps must be positive");
  if (partition.indices().empty() || partition.indices().back() != spectrum.size())
    throw std::invalid_argument("cluster_degrees: partition does not belong to the spectrum");
  ClusterPolynomial poly;
  poly.partition = partition;
  const double log_target = std::log(2.0 / eps);
  for (std::size_t i = 0; i < partition.clusters(); ++i) {
    const Interval I = partition.interval(spectrum, i);
    poly.intervals.push_back(I);
    if (I.degenerate()) {
      poly.degrees.push_back(1);
      continue;
    }
    double growth = 0.0;
    for (std::size_t j = 0; j < i; ++j)
      growth += log_growth_above(poly.intervals[j], poly.degrees[j], I.upper);
    const double p = std::ceil((log_target + growth) / log_inverse_gamma(I));
    poly.degrees.push_back(std::max(0L, static_cast<long>(p)));
  }
  return poly;
}

long ms(const ClusterPolynomial& poly) { return poly.total_degree(); }

PolynomialCheck verify_polynomial(const Spectrum& spectrum, const ClusterPolynomial& poly, double eps)
{
  if (poly.partition.indices().empty() || poly.partition.indices().back() != spectrum.size())
    throw std::invalid_argument("verify_polynomial: partition does not belong to the spectrum");
  const double limit = std::log(eps) + 1e-10;
  PolynomialCheck check;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double v = poly.log_abs(spectrum[k]);
    if (v > check.max_log_abs || k == 0) {
      check.max_log_abs = v;
      check.argmax = k;
    }
  }
  for (std::size_t i = 0; i < poly.clusters(); ++i) {
    const double edge = poly.intervals[i].upper;
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j)
      acc += log_abs_scaled_cheb(poly.intervals[j], static_cast<unsigned>(poly.degrees[j]), edge);
    check.edge_log_abs.push_back(acc);
    if (!(acc < limit))
      check.edges_pass = false;
  }
  check.passed = check.max_log_abs < limit && check.edges_pass;
  return check;
}

}  // namespace pcgb
