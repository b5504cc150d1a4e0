#include "pcgbound/problem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pcgbound/cholesky.hpp"
#include "pcgbound/io.hpp"

namespace pcgb {

GridSpec GridSpec::from_H(double H, int H_over_h)
{
  if (!(H > 0.0) || H > 1.0)
    throw std::invalid_argument("GridSpec: H must lie in (0, 1]");
  const double inv = 1.0 / H;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded)
    throw std::invalid_argument("GridSpec: 1/H must be an integer");
  GridSpec g{static_cast<int>(rounded), H_over_h};
  g.validate();
  return g;
}

std::size_t GridSpec::unknowns() const
{
  const auto m = static_cast<std::size_t>(interior_per_side());
  return m * m;
}

void GridSpec::validate() const
{
  if (subdomains_per_side < 1 || elements_per_subdomain < 1)
    throw std::invalid_argument("GridSpec: 1/H and H/h must be positive integers");
  if (elements_per_side() < 2)
    throw std::invalid_argument("GridSpec: grid needs at least two elements per side");
}

CoefficientField::CoefficientField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
  grid_.validate();
  const auto e = static_cast<std::size_t>(grid_.elements_per_side());
  if (values_.size() != e * e)
    throw std::invalid_argument("CoefficientField: size does not match grid");
  for (double v : values_)
    if (!(v > 0.0))
      throw std::invalid_argument("CoefficientField: coefficients must be positive");
}

std::size_t CoefficientField::count(double value) const
{
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), value));
}

void CoefficientField::write_csv(std::ostream& out) const
{
  const int E = grid_.elements_per_side();
  for (int ey = E - 1; ey >= 0; --ey) {
    for (int ex = 0; ex < E; ++ex) {
      if (ex)
        out << ',';
      out << format_double(at(ex, ey));
    }
    out << '\n';
  }
}

CoefficientField constant_field(const GridSpec& grid, double value)
{
  const auto e = static_cast<std::size_t>(grid.elements_per_side());
  return CoefficientField(grid, std::vector<double>(e * e, value));
}

CoefficientField build_coefficient_field(const GridSpec& grid, const InclusionPattern& p)
{
  grid.validate();
  if (!(p.background > 0.0) || !(p.contrast > 0.0))
    throw std::invalid_argument("InclusionPattern: coefficient values must be positive");
  if (p.inclusions_per_edge < 0)
    throw std::invalid_argument("InclusionPattern: negative inclusion count");
  const int ne = grid.elements_per_subdomain;
  const int N = grid.subdomains_per_side;
  const int E = grid.elements_per_side();
  std::vector<double> values(static_cast<std::size_t>(E) * static_cast<std::size_t>(E), p.background);
  if (p.inclusions_per_edge == 0)
    return CoefficientField(grid, std::move(values));

  const int K = p.inclusions_per_edge;
  if (p.channel_half_length < 1 || p.channel_width < 1)
    throw std::invalid_argument("InclusionPattern: channel length and width must be positive");
  if (2 * p.channel_half_length > ne)
    throw std::invalid_argument("InclusionPattern: channels longer than a subdomain");
  // offsets along the interface segment, relative to the segment start
  std::vector<int> offsets;
  for (int k = 1; k <= K; ++k)
    offsets.push_back(k * ne / (K + 1) - p.channel_width / 2);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (offsets[k] < 0 || offsets[k] + p.channel_width > ne)
      throw std::invalid_argument("InclusionPattern: channels do not fit along a subdomain edge");
    if (k > 0 && offsets[k] < offsets[k - 1] + p.channel_width)
      throw std::invalid_argument("InclusionPattern: too many or too wide channels for one subdomain edge");
  }

  auto set = [&](int ex, int ey) {
    values[static_cast<std::size_t>(ey) * static_cast<std::size_t>(E) + static_cast<std::size_t>(ex)] =
        p.contrast;
  };
  for (int a = 1; a < N; ++a) {
    const int interface = a * ne;
    for (int seg = 0; seg < N; ++seg) {
      for (int off : offsets) {
        for (int w = 0; w < p.channel_width; ++w) {
          const int along = seg * ne + off + w;
          for (int d = -p.channel_half_length; d < p.channel_half_length; ++d) {
            set(interface + d, along);  // crosses the vertical interface x = a*H
            set(along, interface + d);  // crosses the horizontal interface y = a*H
          }
        }
      }
    }
  }
  return CoefficientField(grid, std::move(values));
}

const double (&q1_stiffness())[4][4]
{
  static constexpr double k[4][4] = {
      {2.0 / 3.0, -1.0 / 6.0, -1.0 / 3.0, -1.0 / 6.0},
      {-1.0 / 6.0, 2.0 / 3.0, -1.0 / 6.0, -1.0 / 3.0},
      {-1.0 / 3.0, -1.0 / 6.0, 2.0 / 3.0, -1.0 / 6.0},
      {-1.0 / 6.0, -1.0 / 3.0, -1.0 / 6.0, 2.0 / 3.0},
  };
  return k;
}

DiscreteProblem assemble(const GridSpec& grid, const CoefficientField& field, const LoadSpec& load)
{
  grid.validate();
  if (!(field.grid() == grid))
    throw std::invalid_argument("assemble: coefficient field does not match grid");
  const int E = grid.elements_per_side();
  const double h = grid.h();
  const auto n = grid.unknowns();
  const auto& K = q1_stiffness();

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(E) * static_cast<std::size_t>(E) * 16);
  Vector b(n, 0.0);
  const double element_load = load.f * h * h / 4.0;

  for (int ey = 0; ey < E; ++ey) {
    for (int ex = 0; ex < E; ++ex) {
      const double c = field.at(ex, ey);
      const int nx[4] = {ex, ex + 1, ex + 1, ex};
      const int ny[4] = {ey, ey, ey + 1, ey + 1};
      for (int a = 0; a < 4; ++a) {
        const bool a_free = nx[a] > 0 && nx[a] < E && ny[a] > 0 && ny[a] < E;
        if (!a_free)
          continue;
        const auto ia = grid.node_index(nx[a], ny[a]);
        b[ia] += element_load;
        for (int q = 0; q < 4; ++q) {
          const bool q_free = nx[q] > 0 && nx[q] < E && ny[q] > 0 && ny[q] < E;
          if (q_free)
            triplets.push_back({ia, grid.node_index(nx[q], ny[q]), c * K[a][q]});
          else
            b[ia] -= c * K[a][q] * load.dirichlet;
        }
      }
    }
  }
  return DiscreteProblem{grid, field, SparseMatrix::from_triplets(n, n, std::move(triplets)), std::move(b)};
}

Vector direct_solve(const SparseMatrix& A, std::span<const double> b)
{
  if (b.size() != A.rows())
    throw std::invalid_argument("direct_solve: dimension mismatch");
  const auto factor = CholeskyFactor::factor(A);
  Vector x = factor.solve(b);
  const double bnorm = norm2(b);
  if (bnorm == 0.0)
    return x;
  // a few refinement steps recover the residual lost to the contrast-scaled
  // rounding of the factorization
  for (int step = 0; step < 3; ++step) {
    Vector r = A.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = b[i] - r[i];
    if (norm2(r) <= 1e-14 * bnorm)
      break;
    factor.solve_in_place(r);
    axpy(1.0, r, x);
  }
  return x;
}

Vector direct_solve(const DiscreteProblem& problem) { return direct_solve(problem.A, problem.b); }

}  // namespace pcgb
