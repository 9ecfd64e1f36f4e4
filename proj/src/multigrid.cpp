#include "cutfem/multigrid.hpp"

#include <stdexcept>

namespace cutfem {

SparseMatrix build_prolongation(std::span<const std::array<int, 2>> vertex_parents, std::span<const int> coarse_index,
                                std::span<const int> fine_vertices) {
  int ncoarse = 0;
  for (int c : coarse_index) ncoarse = std::max(ncoarse, c + 1);
  std::vector<Triplet> e;
  for (int i = 0; i < static_cast<int>(fine_vertices.size()); ++i) {
    const auto [a, b] = vertex_parents[fine_vertices[i]];
    if (a == b) {
      if (coarse_index[a] >= 0) e.push_back({i, coarse_index[a], 1.0});
      continue;
    }
    if (coarse_index[a] >= 0) e.push_back({i, coarse_index[a], 0.5});
    if (coarse_index[b] >= 0) e.push_back({i, coarse_index[b], 0.5});
  }
  return SparseMatrix::from_triplets(static_cast<int>(fine_vertices.size()), ncoarse, std::move(e));
}

std::vector<SparseMatrix> hierarchy_prolongations(const MeshHierarchy& hierarchy,
                                                  const std::vector<std::vector<int>>& active) {
  std::vector<SparseMatrix> out;
  for (std::size_t l = 0; l + 1 < active.size(); ++l) {
    std::vector<int> coarse_index(hierarchy.levels[l].num_vertices(), -1);
    for (int i = 0; i < static_cast<int>(active[l].size()); ++i) coarse_index[active[l][i]] = i;
    out.push_back(build_prolongation(hierarchy.vertex_parents[l], coarse_index, active[l + 1]));
  }
  return out;
}

Multigrid::Multigrid(const SparseMatrix& fine, std::vector<SparseMatrix> prolongations, MultigridSettings settings)
    : settings_(settings) {
  // Drop coarse levels that carry no unknowns.
  std::size_t first = 0;
  for (std::size_t l = 0; l < prolongations.size(); ++l)
    if (prolongations[l].cols() == 0) first = l + 1;
  prolongations.erase(prolongations.begin(), prolongations.begin() + first);

  const int nlev = static_cast<int>(prolongations.size()) + 1;
  ops_.resize(nlev);
  ops_[nlev - 1] = fine;
  for (int l = nlev - 2; l >= 0; --l) {
    if (prolongations[l].rows() != ops_[l + 1].rows())
      throw std::invalid_argument("Multigrid: prolongation does not match level size");
    ops_[l] = galerkin_product(ops_[l + 1], prolongations[l]);
  }
  prolongations_ = std::move(prolongations);
  for (const auto& p : prolongations_) restrictions_.push_back(p.transpose());
  coarse_ = std::make_unique<CholeskySolver>(ops_[0]);
}

void Multigrid::vcycle(int level, std::span<const double> r, std::span<double> x) const {
  if (level == 0) {
    coarse_->apply(r, x);
    return;
  }
  const SparseMatrix& a = ops_[level];
  for (int i = 0; i < settings_.pre_smooth; ++i) sgs_sweep(a, r, x);

  Vector res = a * x;
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = r[i] - res[i];
  const Vector rc = restrictions_[level - 1] * res;
  Vector ec(rc.size(), 0.0);
  vcycle(level - 1, rc, ec);
  const Vector ef = prolongations_[level - 1] * ec;
  for (std::size_t i = 0; i < ef.size(); ++i) x[i] += ef[i];

  for (int i = 0; i < settings_.post_smooth; ++i) sgs_sweep(a, r, x);
}

void Multigrid::apply(std::span<const double> r, std::span<double> x) const {
  std::fill(x.begin(), x.end(), 0.0);
  const int top = num_levels() - 1;
  if (top == 0) {
    coarse_->apply(r, x);
    return;
  }
  const SparseMatrix& a = ops_[top];
  Vector res(r.size()), corr(r.size());
  for (int c = 0; c < settings_.cycles; ++c) {
    if (c == 0) {
      vcycle(top, r, x);
      continue;
    }
    a.multiply(x, res);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = r[i] - res[i];
    std::fill(corr.begin(), corr.end(), 0.0);
    vcycle(top, res, corr);
    for (std::size_t i = 0; i < corr.size(); ++i) x[i] += corr[i];
  }
}

}  // namespace cutfem
