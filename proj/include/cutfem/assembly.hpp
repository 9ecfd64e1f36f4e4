#pragma once

#include <functional>

#include "cutfem/geometry.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/space.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

/// How the penalty coefficient alpha_bar is formed from alpha_1, alpha_2.
enum class PenaltyAveraging { Max, Arithmetic, Harmonic };

struct ProblemCoefficients {
  double alpha1 = 1.0;
  double alpha2 = 10.0;
  double gamma = 10.0;  // Nitsche penalty
  double beta = 0.1;    // ghost penalty
  PenaltyAveraging averaging = PenaltyAveraging::Max;

  double alpha(int side) const { return side == 1 ? alpha1 : alpha2; }
  double alpha_bar() const;
  void validate() const;
};

/// Toggles for the individual bilinear-form contributions (all on by default).
struct AssemblyTerms {
  bool volume = true;
  bool consistency = true;  // both Nitsche consistency/symmetry terms
  bool penalty = true;
  bool ghost = true;
};

/// Right-hand side data.  `f(x, side)` is the source, `g(x, side)` the Dirichlet
/// value (box boundary for the interface problem, interface for FD).
struct ProblemData {
  std::function<double(const Vec3&, int)> f = [](const Vec3&, int) { return 0.0; };
  std::function<double(const Vec3&, int)> g = [](const Vec3&, int) { return 0.0; };
};

/// Linear system in the CutFEM basis after Dirichlet elimination.
struct AssembledSystem {
  SparseMatrix A;
  Vector b;
  Vector fixed_values;  // Dirichlet values, indexed like DofLayout::fixed_owner
};

AssembledSystem assemble_interface(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout,
                                   const ProblemCoefficients& coeffs, const ProblemData& data,
                                   const AssemblyTerms& terms = {});

AssembledSystem assemble_fd(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout,
                            const ProblemCoefficients& coeffs, const ProblemData& data,
                            const AssemblyTerms& terms = {});

/// Standard P1 stiffness matrix of alpha * Laplacian on the given vertex set
/// (classical element loop, no cut handling), for comparisons.
SparseMatrix assemble_p1_laplacian(const Mesh& mesh, std::span<const int> vertices, double alpha = 1.0);

/// Change of basis from split coordinates (x0 | x1) to CutFEM coordinates.
/// Square, entries in {0, 1}.  For FD this is a permutation.
SparseMatrix build_L(const DofLayout& layout);

struct TransformedSystem {
  SparseMatrix A;     // CutFEM basis
  SparseMatrix L;
  SparseMatrix Ahat;  // L^T A L
  Vector bhat;        // L^T b
  SparseMatrix A0;    // x0 x x0 block
  SparseMatrix A1;    // x1 x x1 block
  Vector D1;          // diag(A1)
  int N0 = 0;
  int N1 = 0;
};

/// Forms Ahat = L^T A L and its diagonal blocks.  Throws std::domain_error if
/// diag(A1) has a non-positive entry.
TransformedSystem transform(const SparseMatrix& A, const Vector& b, const SparseMatrix& L, int N0);

/// Expands a solution in CutFEM coordinates (free unknowns) to per-side
/// vertex values; inactive entries are NaN.
std::array<Vector, 2> side_vertex_values(const DofLayout& layout, std::span<const double> x_free,
                                         std::span<const double> fixed_values);

}  // namespace cutfem
