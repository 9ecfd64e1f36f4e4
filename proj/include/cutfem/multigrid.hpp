#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "cutfem/mesh.hpp"
#include "cutfem/solver.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

/// Nested P1 interpolation between active vertex sets of two consecutive
/// levels.  Coarse vertices map with weight 1, edge midpoints with 1/2 to each
/// active parent.  Inactive parents contribute nothing.
///
/// `vertex_parents` is indexed by fine vertex (see Refinement), `coarse_index`
/// maps coarse vertex -> coarse dof (or -1), `fine_vertices` lists the fine
/// dofs' vertices in dof order.
SparseMatrix build_prolongation(std::span<const std::array<int, 2>> vertex_parents, std::span<const int> coarse_index,
                                std::span<const int> fine_vertices);

/// Prolongations for levels 0..active.size()-1 of a hierarchy; active[l] is
/// the sorted vertex list carrying unknowns on level l.
std::vector<SparseMatrix> hierarchy_prolongations(const MeshHierarchy& hierarchy,
                                                  const std::vector<std::vector<int>>& active);

struct MultigridSettings {
  int cycles = 3;        // V-cycles per application
  int pre_smooth = 1;    // SGS iterations before coarse correction
  int post_smooth = 1;   // SGS iterations after coarse correction
};

/// Geometric multigrid with Galerkin coarse operators P^T A P, symmetric
/// Gauss-Seidel smoothing and a direct solve on the coarsest level.  As a
/// preconditioner it applies `cycles` V-cycles starting from zero, which is a
/// symmetric positive definite operator.
class Multigrid final : public LinearOperator {
 public:
  /// prolongations[l] maps level l to level l+1; the finest level operator is `fine`.
  Multigrid(const SparseMatrix& fine, std::vector<SparseMatrix> prolongations, MultigridSettings settings = {});

  int size() const override { return ops_.back().rows(); }
  void apply(std::span<const double> r, std::span<double> x) const override;

  int num_levels() const { return static_cast<int>(ops_.size()); }
  const SparseMatrix& level_operator(int l) const { return ops_[l]; }

  /// One V-cycle for A x = r updating x in place.
  void vcycle(int level, std::span<const double> r, std::span<double> x) const;

 private:
  std::vector<SparseMatrix> ops_;           // ops_[0] coarsest
  std::vector<SparseMatrix> prolongations_;  // prolongations_[l]: l -> l+1
  std::vector<SparseMatrix> restrictions_;
  std::unique_ptr<CholeskySolver> coarse_;
  MultigridSettings settings_;
};

}  // namespace cutfem
