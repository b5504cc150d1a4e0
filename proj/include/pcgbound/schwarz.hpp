#pragma once

/** @file schwarz.hpp
    @brief Two-level overlapping additive Schwarz preconditioner
           M^{-1} = Phi A0^{-1} Phi^T + sum_i R_i^T A_i^{-1} R_i
           with GDSW and reduced-dimension GDSW coarse spaces.

    Phi is stored as an n x n_coarse prolongation and A0 = Phi^T A Phi.
*/

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgbound/cholesky.hpp"
#include "pcgbound/linalg.hpp"
#include "pcgbound/problem.hpp"

namespace pcgb {

using IndexSet = std::vector<std::size_t>;

struct InterfaceComponent {
  enum class Kind { vertex, edge };
  Kind kind;
  IndexSet nodes;           ///< sorted unknown indices
  IndexSet subdomains;      ///< sorted subdomains whose closures contain the component
};

/**
 * @brief Structured box decomposition of the interior unknowns.
 *
 * Subdomain (a, b) covers elements [a*H/h, (a+1)*H/h) x [b*H/h, (b+1)*H/h) and has
 * index b * (1/H) + a. A node on an interface line is owned by the subdomain above
 * / to the right of it, so the owned sets partition the unknowns.
 */
class DomainDecomposition {
 public:
  DomainDecomposition(GridSpec grid, int overlap);

  const GridSpec& grid() const { return grid_; }
  int overlap() const { return overlap_; }
  std::size_t subdomains() const { return owned_.size(); }

  const IndexSet& owned(std::size_t s) const { return owned_[s]; }
  const IndexSet& overlapping(std::size_t s) const { return overlapping_[s]; }
  /// Unknowns of the subdomain closure that are not on the interface.
  const IndexSet& interior(std::size_t s) const { return interior_[s]; }
  /// Interface unknowns of the subdomain closure.
  const IndexSet& interface_of(std::size_t s) const { return interface_of_[s]; }
  std::size_t owner(std::size_t node) const { return owner_[node]; }

  const std::vector<InterfaceComponent>& components() const { return components_; }
  std::size_t count(InterfaceComponent::Kind kind) const;
  /// Component index of an interface node, or npos.
  std::size_t component_of(std::size_t node) const { return component_of_[node]; }

  /// Closures (subdomain indices) containing node (ix, iy), sorted.
  IndexSet closures(int ix, int iy) const;

  /// node,ix,iy,owner,component
  void write_csv(std::ostream& out) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  GridSpec grid_;
  int overlap_;
  std::vector<IndexSet> owned_;
  std::vector<IndexSet> overlapping_;
  std::vector<IndexSet> interior_;
  std::vector<IndexSet> interface_of_;
  std::vector<std::size_t> owner_;
  std::vector<InterfaceComponent> components_;
  std::vector<std::size_t> component_of_;
};

/// Requires 1/H >= 2 and 0 <= overlap <= H/h.
DomainDecomposition decompose(const GridSpec& grid, int overlap_layers);

enum class CoarseKind { none, gdsw, rgdsw };

std::string to_string(CoarseKind kind);
CoarseKind parse_coarse_kind(const std::string& name);

struct CoarseSpace {
  CoarseKind kind = CoarseKind::none;
  SparseMatrix prolongation;  ///< Phi, n x n_coarse
  SparseMatrix galerkin;      ///< A0 = Phi^T A Phi

  std::size_t dimension() const { return prolongation.cols(); }
};

/// Interface values to be extended: one column per coarse function.
CoarseSpace build_coarse_space(const SparseMatrix& A, const DomainDecomposition& dd,
                               const SparseMatrix& interface_values, CoarseKind kind);

/// One function per vertex and edge component, constant 1 on its component.
CoarseSpace build_gdsw(const SparseMatrix& A, const DomainDecomposition& dd);

/// One function per subdomain vertex; edge nodes share their unit value equally
/// between the vertices at the ends of their edge.
CoarseSpace build_rgdsw(const SparseMatrix& A, const DomainDecomposition& dd);

/// Discrete harmonic extension of interface data into every subdomain interior.
Vector harmonic_extension(const SparseMatrix& A, const DomainDecomposition& dd, std::span<const double> values);

class SchwarzPreconditioner {
 public:
  SchwarzPreconditioner() = default;

  /// Explicit overlapping index sets; @p coarse may be empty for one-level.
  SchwarzPreconditioner(const SparseMatrix& A, std::vector<IndexSet> subdomains,
                        std::optional<CoarseSpace> coarse = std::nullopt);

  static SchwarzPreconditioner assemble(const SparseMatrix& A, const DomainDecomposition& dd, CoarseKind kind);

  std::size_t size() const { return n_; }
  bool assembled() const { return assembled_; }
  std::size_t subdomain_count() const { return local_.size(); }
  const std::optional<CoarseSpace>& coarse() const { return coarse_; }

  /// z = M^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  Vector apply(std::span<const double> r) const;

 private:
  struct LocalSolver {
    IndexSet indices;
    CholeskyFactor factor;
  };

  std::size_t n_ = 0;
  bool assembled_ = false;
  std::vector<LocalSolver> local_;
  std::optional<CoarseSpace> coarse_;
  CholeskyFactor coarse_factor_;
};

}  // namespace pcgb
