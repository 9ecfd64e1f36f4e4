#pragma once

#include <array>
#include <vector>

#include "cutfem/geometry.hpp"
#include "cutfem/mesh.hpp"

namespace cutfem {

enum class ProblemKind { Interface, Fictitious };

/// Vertex index sets of the subspace splitting, all sorted by vertex id.
///
/// Interface problem: vertices on the box boundary carry Dirichlet data and
/// are excluded from every set; they are listed in `fixed[side-1]` for each
/// side whose extended subdomain touches them.
/// Fictitious domain problem: I0 = I1 \ IGamma1 and only side 1 is used.
struct IndexSets {
  ProblemKind kind = ProblemKind::Interface;
  std::vector<int> I0;
  std::array<std::vector<int>, 2> I;  // I_1, I_2
  std::vector<int> IGamma;
  std::array<std::vector<int>, 2> IGammaSide;  // I^Gamma_1 (phi > 0), I^Gamma_2 (phi < 0)
  std::array<std::vector<int>, 2> fixed;
};

/// Builds and validates the index sets; throws StructuralError when the
/// disjoint-partition identities fail.
IndexSets build_index_sets(const Mesh& mesh, const CutInfo& cut, ProblemKind kind);

/// Reference to a CutFEM coefficient: free unknown or Dirichlet-fixed value.
struct DofRef {
  int index = -1;
  bool fixed = false;
  bool valid() const { return index >= 0; }
};

/// Degree-of-freedom numbering for the CutFEM basis (side-wise) and for the
/// split basis (x0 | x1).
struct DofLayout {
  ProblemKind kind = ProblemKind::Interface;
  int num_vertices = 0;

  // CutFEM basis, interface: [I1\IG1, IG1 | I2\IG2, IG2]; FD: [I1\IG1, IG1].
  std::array<std::vector<int>, 2> free_dof;   // per side: vertex -> free index or -1
  std::array<std::vector<int>, 2> fixed_dof;  // per side: vertex -> fixed index or -1
  std::vector<std::array<int, 2>> free_owner;   // free index -> (side, vertex)
  std::vector<std::array<int, 2>> fixed_owner;  // fixed index -> (side, vertex)

  // Split basis.
  std::vector<int> x0_vertices;  // I0 (interface) or I1\IG1 (FD)
  std::vector<int> x1_vertices;  // IGamma (interface) or IG1 (FD)
  std::vector<int> x0_index;     // vertex -> position in x0 or -1
  std::vector<int> x1_index;     // vertex -> position in x1 or -1
  std::array<std::vector<char>, 2> x1_on_side;  // vertex in IGamma_side

  int num_free() const { return static_cast<int>(free_owner.size()); }
  int num_fixed() const { return static_cast<int>(fixed_owner.size()); }
  int N0() const { return static_cast<int>(x0_vertices.size()); }
  int N1() const { return static_cast<int>(x1_vertices.size()); }

  DofRef dof(int side, int vertex) const {
    const int f = free_dof[side - 1][vertex];
    if (f >= 0) return {f, false};
    return {fixed_dof[side - 1][vertex], true};
  }
};

DofLayout build_dof_layout(const IndexSets& sets, int num_vertices);

struct BasisEval {
  std::array<double, 4> values{};
  std::array<Vec3, 4> gradients{};
};

/// Values and gradients of the four nodal P1 functions of tet x at point p.
/// Throws std::invalid_argument if p lies outside the tet (tolerance 1e-10).
BasisEval evaluate_basis(const TetCoords& x, const Vec3& p);

}  // namespace cutfem
