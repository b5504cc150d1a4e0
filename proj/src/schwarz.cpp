#include "pcgbound/schwarz.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace pcgb {

// ---------------------------------------------------------------------------
// DomainDecomposition

namespace {

struct Range {
  int lo;
  int hi;  // inclusive
};

}  // namespace

DomainDecomposition::DomainDecomposition(GridSpec grid, int overlap) : grid_(grid), overlap_(overlap)
{
  grid_.validate();
  const int N = grid_.subdomains_per_side;
  const int ne = grid_.elements_per_subdomain;
  const int E = grid_.elements_per_side();
  if (N < 2)
    throw std::invalid_argument("decompose: need at least 2 subdomains per side");
  if (overlap < 0 || overlap > ne)
    throw std::invalid_argument("decompose: overlap must lie in [0, H/h]");

  const std::size_t n = grid_.unknowns();
  const std::size_t S = static_cast<std::size_t>(N) * static_cast<std::size_t>(N);
  owned_.resize(S);
  overlapping_.resize(S);
  interior_.resize(S);
  interface_of_.resize(S);
  owner_.assign(n, 0);
  component_of_.assign(n, npos);

  auto owned_range = [&](int a) { return Range{a == 0 ? 1 : a * ne, a == N - 1 ? E - 1 : (a + 1) * ne - 1}; };
  auto box_nodes = [&](Range x, Range y) {
    IndexSet out;
    for (int iy = y.lo; iy <= y.hi; ++iy)
      for (int ix = x.lo; ix <= x.hi; ++ix)
        out.push_back(grid_.node_index(ix, iy));
    return out;
  };

  for (int b = 0; b < N; ++b) {
    for (int a = 0; a < N; ++a) {
      const auto s = static_cast<std::size_t>(b * N + a);
      const Range ox = owned_range(a), oy = owned_range(b);
      owned_[s] = box_nodes(ox, oy);
      for (auto node : owned_[s])
        owner_[node] = s;
      overlapping_[s] = box_nodes({std::max(1, ox.lo - overlap), std::min(E - 1, ox.hi + overlap)},
                                  {std::max(1, oy.lo - overlap), std::min(E - 1, oy.hi + overlap)});
      const Range cx{std::max(1, a * ne), std::min(E - 1, (a + 1) * ne)};
      const Range cy{std::max(1, b * ne), std::min(E - 1, (b + 1) * ne)};
      for (auto node : box_nodes(cx, cy)) {
        const int ix = grid_.node_x(node), iy = grid_.node_y(node);
        if (ix % ne == 0 || iy % ne == 0)
          interface_of_[s].push_back(node);
        else
          interior_[s].push_back(node);
      }
    }
  }

  // components, numbered in order of first appearance along the node numbering
  std::map<IndexSet, std::size_t> edge_lookup;
  for (std::size_t node = 0; node < n; ++node) {
    const int ix = grid_.node_x(node), iy = grid_.node_y(node);
    auto subs = closures(ix, iy);
    if (subs.size() < 2)
      continue;
    if (subs.size() >= 3) {
      component_of_[node] = components_.size();
      components_.push_back({InterfaceComponent::Kind::vertex, {node}, std::move(subs)});
      continue;
    }
    auto [it, inserted] = edge_lookup.try_emplace(subs, components_.size());
    if (inserted)
      components_.push_back({InterfaceComponent::Kind::edge, {}, subs});
    components_[it->second].nodes.push_back(node);
    component_of_[node] = it->second;
  }
}

IndexSet DomainDecomposition::closures(int ix, int iy) const
{
  const int N = grid_.subdomains_per_side;
  const int ne = grid_.elements_per_subdomain;
  auto along = [&](int i) {
    std::vector<int> out;
    for (int a = std::max(0, i / ne - 1); a <= std::min(N - 1, i / ne); ++a)
      if (a * ne <= i && i <= (a + 1) * ne)
        out.push_back(a);
    return out;
  };
  IndexSet subs;
  for (int b : along(iy))
    for (int a : along(ix))
      subs.push_back(static_cast<std::size_t>(b * N + a));
  std::sort(subs.begin(), subs.end());
  return subs;
}

std::size_t DomainDecomposition::count(InterfaceComponent::Kind kind) const
{
  return static_cast<std::size_t>(
      std::count_if(components_.begin(), components_.end(), [&](const auto& c) { return c.kind == kind; }));
}

void DomainDecomposition::write_csv(std::ostream& out) const
{
  out << "node,ix,iy,owner,component\n";
  for (std::size_t node = 0; node < owner_.size(); ++node) {
    out << node << ',' << grid_.node_x(node) << ',' << grid_.node_y(node) << ',' << owner_[node] << ',';
    if (component_of_[node] != npos)
      out << component_of_[node];
    out << '\n';
  }
}

DomainDecomposition decompose(const GridSpec& grid, int overlap_layers)
{
  return DomainDecomposition(grid, overlap_layers);
}

// ---------------------------------------------------------------------------
// coarse spaces

std::string to_string(CoarseKind kind)
{
  switch (kind) {
    case CoarseKind::none: return "none";
    case CoarseKind::gdsw: return "gdsw";
    case CoarseKind::rgdsw: return "rgdsw";
  }
  return "none";
}

CoarseKind parse_coarse_kind(const std::string& name)
{
  if (name == "none" || name == "one-level")
    return CoarseKind::none;
  if (name == "gdsw" || name == "GDSW")
    return CoarseKind::gdsw;
  if (name == "rgdsw" || name == "RGDSW")
    return CoarseKind::rgdsw;
  throw std::invalid_argument("unknown coarse space '" + name + "'");
}

namespace {

// Interior Dirichlet solvers A_II^{-1}, one per subdomain.
class InteriorSolvers {
 public:
  InteriorSolvers(const SparseMatrix& A, const DomainDecomposition& dd) : A_(A), dd_(dd)
  {
    factors_.reserve(dd.subdomains());
    for (std::size_t s = 0; s < dd.subdomains(); ++s)
      factors_.push_back(CholeskyFactor::factor(A.principal_submatrix(dd.interior(s))));
  }

  // x_I = -A_II^{-1} A_IG g for the interface data held in the dense work vector g
  Vector extend(std::size_t s, std::span<const double> g) const
  {
    const auto& I = dd_.interior(s);
    const auto rp = A_.row_ptr();
    const auto ci = A_.col_idx();
    const auto va = A_.values();
    Vector rhs(I.size(), 0.0);
    for (std::size_t r = 0; r < I.size(); ++r) {
      double acc = 0.0;
      for (std::size_t k = rp[I[r]]; k < rp[I[r] + 1]; ++k)
        if (dd_.component_of(ci[k]) != DomainDecomposition::npos)
          acc += va[k] * g[ci[k]];
      rhs[r] = -acc;
    }
    factors_[s].solve_in_place(rhs);
    return rhs;
  }

 private:
  const SparseMatrix& A_;
  const DomainDecomposition& dd_;
  std::vector<CholeskyFactor> factors_;
};

void check_operator(const SparseMatrix& A, const DomainDecomposition& dd)
{
  if (A.rows() != A.cols() || A.rows() != dd.grid().unknowns())
    throw std::invalid_argument("coarse space: matrix does not match the decomposition");
}

}  // namespace

Vector harmonic_extension(const SparseMatrix& A, const DomainDecomposition& dd, std::span<const double> values)
{
  check_operator(A, dd);
  if (values.size() != A.rows())
    throw std::invalid_argument("harmonic_extension: dimension mismatch");
  InteriorSolvers solvers(A, dd);
  Vector out(values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (dd.component_of(i) != DomainDecomposition::npos)
      out[i] = values[i];
  for (std::size_t s = 0; s < dd.subdomains(); ++s) {
    const auto x = solvers.extend(s, out);
    const auto& I = dd.interior(s);
    for (std::size_t r = 0; r < I.size(); ++r)
      out[I[r]] = x[r];
  }
  return out;
}

CoarseSpace build_coarse_space(const SparseMatrix& A, const DomainDecomposition& dd,
                               const SparseMatrix& interface_values, CoarseKind kind)
{
  check_operator(A, dd);
  if (interface_values.rows() != A.rows())
    throw std::invalid_argument("coarse space: interface data has wrong row count");
  const std::size_t n = A.rows();
  const std::size_t nc = interface_values.cols();
  const auto by_column = interface_values.transpose();
  const auto cp = by_column.row_ptr();
  const auto cc = by_column.col_idx();
  const auto cv = by_column.values();
  const auto vp = interface_values.row_ptr();
  const auto vc = interface_values.col_idx();

  std::vector<Triplet> triplets;
  for (std::size_t c = 0; c < nc; ++c) {
    if (cp[c] == cp[c + 1])
      throw std::invalid_argument("coarse space: empty basis function " + std::to_string(c));
    for (std::size_t k = cp[c]; k < cp[c + 1]; ++k) {
      if (dd.component_of(cc[k]) == DomainDecomposition::npos)
        throw std::invalid_argument("coarse space: interface data on a non-interface node");
      triplets.push_back({cc[k], c, cv[k]});
    }
  }

  InteriorSolvers solvers(A, dd);
  Vector work(n, 0.0);
  for (std::size_t s = 0; s < dd.subdomains(); ++s) {
    IndexSet touching;
    for (auto node : dd.interface_of(s))
      for (std::size_t k = vp[node]; k < vp[node + 1]; ++k)
        touching.push_back(vc[k]);
    std::sort(touching.begin(), touching.end());
    touching.erase(std::unique(touching.begin(), touching.end()), touching.end());

    const auto& I = dd.interior(s);
    for (auto c : touching) {
      for (std::size_t k = cp[c]; k < cp[c + 1]; ++k)
        work[cc[k]] = cv[k];
      const auto x = solvers.extend(s, work);
      for (std::size_t k = cp[c]; k < cp[c + 1]; ++k)
        work[cc[k]] = 0.0;
      for (std::size_t r = 0; r < I.size(); ++r)
        if (x[r] != 0.0)
          triplets.push_back({I[r], c, x[r]});
    }
  }

  CoarseSpace space;
  space.kind = kind;
  space.prolongation = SparseMatrix::from_triplets(n, nc, std::move(triplets));
  space.galerkin = multiply(space.prolongation.transpose(), multiply(A, space.prolongation));
  return space;
}

CoarseSpace build_gdsw(const SparseMatrix& A, const DomainDecomposition& dd)
{
  std::vector<Triplet> values;
  const auto& comps = dd.components();
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto node : comps[c].nodes)
      values.push_back({node, c, 1.0});
  return build_coarse_space(A, dd, SparseMatrix::from_triplets(A.rows(), comps.size(), std::move(values)),
                            CoarseKind::gdsw);
}

CoarseSpace build_rgdsw(const SparseMatrix& A, const DomainDecomposition& dd)
{
  const auto& comps = dd.components();
  std::vector<std::size_t> coarse_index(comps.size(), DomainDecomposition::npos);
  std::vector<IndexSet> vertices_of_subdomain(dd.subdomains());
  std::size_t nc = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (comps[c].kind != InterfaceComponent::Kind::vertex)
      continue;
    coarse_index[c] = nc++;
    for (auto s : comps[c].subdomains)
      vertices_of_subdomain[s].push_back(c);
  }

  std::vector<Triplet> values;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.kind == InterfaceComponent::Kind::vertex) {
      values.push_back({comp.nodes.front(), coarse_index[c], 1.0});
      continue;
    }
    // ancestors: vertices whose subdomain set contains the edge's subdomain set
    IndexSet ancestors;
    for (auto v : vertices_of_subdomain[comp.subdomains.front()])
      if (std::includes(comps[v].subdomains.begin(), comps[v].subdomains.end(), comp.subdomains.begin(),
                        comp.subdomains.end()))
        ancestors.push_back(v);
    if (ancestors.empty())
      throw std::runtime_error("rgdsw: interface edge without a coarse vertex");
    const double share = 1.0 / static_cast<double>(ancestors.size());
    for (auto node : comp.nodes)
      for (auto v : ancestors)
        values.push_back({node, coarse_index[v], share});
  }
  return build_coarse_space(A, dd, SparseMatrix::from_triplets(A.rows(), nc, std::move(values)),
                            CoarseKind::rgdsw);
}

// ---------------------------------------------------------------------------
// SchwarzPreconditioner

SchwarzPreconditioner::SchwarzPreconditioner(const SparseMatrix& A, std::vector<IndexSet> subdomains,
                                             std::optional<CoarseSpace> coarse)
    : n_(A.rows()), coarse_(std::move(coarse))
{
  if (A.rows() != A.cols())
    throw std::invalid_argument("SchwarzPreconditioner: matrix is not square");
  local_.reserve(subdomains.size());
  for (auto& idx : subdomains) {
    if (!std::is_sorted(idx.begin(), idx.end()) || (!idx.empty() && idx.back() >= n_))
      throw std::invalid_argument("SchwarzPreconditioner: subdomain indices must be sorted and in range");
    auto factor = CholeskyFactor::factor(A.principal_submatrix(idx));
    local_.push_back({std::move(idx), std::move(factor)});
  }
  if (coarse_) {
    if (coarse_->kind == CoarseKind::none) {
      coarse_.reset();
    } else {
      if (coarse_->prolongation.rows() != n_)
        throw std::invalid_argument("SchwarzPreconditioner: coarse space does not match the matrix");
      coarse_factor_ = CholeskyFactor::factor(coarse_->galerkin);
    }
  }
  assembled_ = true;
}

SchwarzPreconditioner SchwarzPreconditioner::assemble(const SparseMatrix& A, const DomainDecomposition& dd,
                                                      CoarseKind kind)
{
  std::vector<IndexSet> sets;
  for (std::size_t s = 0; s < dd.subdomains(); ++s)
    sets.push_back(dd.overlapping(s));
  std::optional<CoarseSpace> coarse;
  if (kind == CoarseKind::gdsw)
    coarse = build_gdsw(A, dd);
  else if (kind == CoarseKind::rgdsw)
    coarse = build_rgdsw(A, dd);
  return SchwarzPreconditioner(A, std::move(sets), std::move(coarse));
}

void SchwarzPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
  if (!assembled_)
    throw std::logic_error("SchwarzPreconditioner: not assembled");
  if (r.size() != n_ || z.size() != n_)
    throw std::invalid_argument("SchwarzPreconditioner::apply: dimension mismatch");
  std::fill(z.begin(), z.end(), 0.0);
  if (coarse_) {
    auto rc = coarse_->prolongation.multiply_transposed(r);
    coarse_factor_.solve_in_place(rc);
    const auto zc = coarse_->prolongation.multiply(rc);
    for (std::size_t i = 0; i < n_; ++i)
      z[i] += zc[i];
  }
  Vector local;
  for (const auto& sub : local_) {
    local.resize(sub.indices.size());
    for (std::size_t k = 0; k < local.size(); ++k)
      local[k] = r[sub.indices[k]];
    sub.factor.solve_in_place(local);
    for (std::size_t k = 0; k < local.size(); ++k)
      z[sub.indices[k]] += local[k];
  }
}

Vector SchwarzPreconditioner::apply(std::span<const double> r) const
{
  Vector z(r.size());
  apply(r, z);
  return z;
}

}  // namespace pcgb
