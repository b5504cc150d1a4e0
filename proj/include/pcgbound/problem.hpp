#pragma once

/** @file problem.hpp
    @brief High-contrast scalar elliptic model problem -div(C grad u) = f on the unit
           square, discretized with bilinear (Q1) elements on a uniform grid.

    Grid nodes are indexed (ix, iy) with 0 <= ix, iy <= E, where E is the number of
    elements per side. Dirichlet nodes (ix or iy in {0, E}) are eliminated; interior
    node (ix, iy) gets unknown index (iy - 1) * (E - 1) + (ix - 1).
*/

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pcgbound/linalg.hpp"

namespace pcgb {

struct GridSpec {
  int subdomains_per_side = 4;       ///< 1/H
  int elements_per_subdomain = 16;   ///< H/h

  /// Builds from H and H/h; throws unless 1/H is a positive integer.
  static GridSpec from_H(double H, int H_over_h);

  int elements_per_side() const { return subdomains_per_side * elements_per_subdomain; }
  int interior_per_side() const { return elements_per_side() - 1; }
  std::size_t unknowns() const;
  double h() const { return 1.0 / elements_per_side(); }

  std::size_t node_index(int ix, int iy) const
  {
    return static_cast<std::size_t>(iy - 1) * static_cast<std::size_t>(interior_per_side()) +
           static_cast<std::size_t>(ix - 1);
  }
  int node_x(std::size_t idx) const { return static_cast<int>(idx % interior_per_side()) + 1; }
  int node_y(std::size_t idx) const { return static_cast<int>(idx / interior_per_side()) + 1; }

  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Channels of contrast coefficient crossing every interior subdomain interface.
struct InclusionPattern {
  int inclusions_per_edge = 3;
  int channel_half_length = 3;  ///< elements on each side of the interface
  int channel_width = 1;        ///< elements
  double background = 1.0;
  double contrast = 1e8;
};

/// Element-wise constant coefficient, element (ex, ey) at ey * E + ex.
class CoefficientField {
 public:
  CoefficientField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  double at(int ex, int ey) const
  {
    return values_[static_cast<std::size_t>(ey) * static_cast<std::size_t>(grid_.elements_per_side()) +
                   static_cast<std::size_t>(ex)];
  }
  const std::vector<double>& values() const { return values_; }
  std::size_t count(double value) const;

  /// Raster with one row per element row, top row first.
  void write_csv(std::ostream& out) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

CoefficientField constant_field(const GridSpec& grid, double value);

/// Evenly spaced channels along every interior interface segment, each crossing
/// the interface perpendicularly. Throws std::invalid_argument when the pattern
/// does not fit into one subdomain.
CoefficientField build_coefficient_field(const GridSpec& grid, const InclusionPattern& pattern);

struct LoadSpec {
  double f = 1.0;          ///< constant source
  double dirichlet = 0.0;  ///< constant boundary value u_D
};

struct DiscreteProblem {
  GridSpec grid;
  CoefficientField field;
  SparseMatrix A;  ///< interior unknowns only
  Vector b;
};

/// Q1 reference stiffness matrix for a unit coefficient on a square element,
/// local node order (0,0), (1,0), (1,1), (0,1).
const double (&q1_stiffness())[4][4];

DiscreteProblem assemble(const GridSpec& grid, const CoefficientField& field, const LoadSpec& load = {});

/// Envelope Cholesky plus iterative refinement. The residual reaches roundoff level,
/// eps ||A|| ||u||, which at high contrast is well above eps ||b||.
Vector direct_solve(const DiscreteProblem& problem);
Vector direct_solve(const SparseMatrix& A, std::span<const double> b);

}  // namespace pcgb
