#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pcgbound/partition.hpp"

namespace pcgb {

double lambert_w_minus1_expansion(double x)
{
  const double L = std::log(-x);
  const double l = std::log(-L);
  return L - l + l / L;
}

double lambert_w_minus1(double x)
{
  const double branch = -std::exp(-1.0);
  if (!(x < 0.0) || x < branch * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
    throw std::domain_error("lambert_w_minus1: x = " + std::to_string(x) + " outside [-1/e, 0)");
  if (x <= branch)
    return -1.0;

  // seed: branch-point series near -1/e, asymptotic expansion near 0
  double w;
  if (x < -0.25) {
    const double p = -std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * x)));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = lambert_w_minus1_expansion(x);
  }
  if (w > -1.0)
    w = -1.0 - 1e-12;

  // Halley iteration on f(w) = w e^w - x
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0)
      break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    double next = w - step;
    if (next > -1.0)
      next = 0.5 * (w - 1.0);  // stay on the lower branch
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next)) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

}  // namespace pcgb
