#include "cutfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutfem/simplex.hpp"

namespace cutfem {

double ProblemCoefficients::alpha_bar() const {
  switch (averaging) {
    case PenaltyAveraging::Max:
      return std::max(alpha1, alpha2);
    case PenaltyAveraging::Arithmetic:
      return 0.5 * (alpha1 + alpha2);
    case PenaltyAveraging::Harmonic:
      return 2.0 * alpha1 * alpha2 / (alpha1 + alpha2);
  }
  return std::max(alpha1, alpha2);
}

void ProblemCoefficients::validate() const {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) throw std::invalid_argument("coefficients: alpha must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("coefficients: gamma must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("coefficients: beta must be non-negative");
}

namespace {

// Collects element contributions in an extended numbering where fixed
// (Dirichlet) unknowns follow the free ones; only free rows are stored.
class Collector {
 public:
  explicit Collector(const DofLayout& layout)
      : layout_(layout), nfree_(layout.num_free()), load_(layout.num_free(), 0.0) {}

  int column(const DofRef& d) const { return d.fixed ? nfree_ + d.index : d.index; }

  void add(const DofRef& row, const DofRef& col, double v) {
    if (!row.valid() || row.fixed || !col.valid()) return;
    entries_.push_back({row.index, column(col), v});
  }
  void add_load(const DofRef& row, double v) {
    if (row.valid() && !row.fixed) load_[row.index] += v;
  }

  AssembledSystem finish(const Mesh& mesh, const ProblemData& data) && {
    const int nfixed = layout_.num_fixed();
    SparseMatrix full = SparseMatrix::from_triplets(nfree_, nfree_ + nfixed, std::move(entries_));
    AssembledSystem sys;
    sys.fixed_values.resize(nfixed);
    for (int j = 0; j < nfixed; ++j) {
      const auto [side, v] = layout_.fixed_owner[j];
      sys.fixed_values[j] = data.g(mesh.vertices[v], side);
    }
    std::vector<int> free_idx(nfree_), fixed_idx(nfixed);
    for (int i = 0; i < nfree_; ++i) free_idx[i] = i;
    for (int j = 0; j < nfixed; ++j) fixed_idx[j] = nfree_ + j;
    sys.A = full.submatrix(free_idx, free_idx);
    sys.b = std::move(load_);
    if (nfixed > 0) {
      const SparseMatrix afb = full.submatrix(free_idx, fixed_idx);
      const Vector lift = afb * sys.fixed_values;
      for (int i = 0; i < nfree_; ++i) sys.b[i] -= lift[i];
    }
    return sys;
  }

 private:
  const DofLayout& layout_;
  int nfree_;
  std::vector<Triplet> entries_;
  Vector load_;
};

double facet_diameter(const Mesh& mesh, const Facet& f) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) d = std::max(d, norm(mesh.vertices[f.vertices[i]] - mesh.vertices[f.vertices[j]]));
  return d;
}

double facet_area(const Mesh& mesh, const Facet& f) {
  return triangle_area(mesh.vertices[f.vertices[0]], mesh.vertices[f.vertices[1]], mesh.vertices[f.vertices[2]]);
}

// beta * h_F * |F| * [d_n u][d_n v] for P1 functions of one side.
void add_ghost_penalty(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout, int side, double beta,
                       Collector& out) {
  if (beta == 0.0) return;
  for (int f : cut.ghost_facets[side - 1]) {
    const Facet& F = mesh.facets[f];
    std::array<int, 5> verts{};
    std::array<double, 5> coef{};
    int n = 0;
    for (int k = 0; k < 2; ++k) {
      const int t = F.tets[k];
      const auto g = barycentric_gradients(tet_coords(mesh, t));
      const double sign = k == 0 ? 1.0 : -1.0;
      for (int i = 0; i < 4; ++i) {
        const int v = mesh.tets[t][i];
        int pos = std::find(verts.begin(), verts.begin() + n, v) - verts.begin();
        if (pos == n) {
          verts[n] = v;
          coef[n] = 0.0;
          ++n;
        }
        coef[pos] += sign * dot(g[i], F.normal);
      }
    }
    const double scale = beta * facet_diameter(mesh, F) * facet_area(mesh, F);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out.add(layout.dof(side, verts[a]), layout.dof(side, verts[b]), scale * coef[a] * coef[b]);
  }
}

// Volume stiffness and load on T ∩ Omega_side.
void add_volume_terms(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout, int t, int side,
                      double alpha, const ProblemData& data, bool stiffness, Collector& out) {
  const TetCoords x = tet_coords(mesh, t);
  const auto g = barycentric_gradients(x);
  double vol;
  QuadRule rule;
  if (cut.is_cut(t)) {
    const auto& c = cut.cut(t).volume;
    vol = side == 1 ? c.vol_neg : c.vol_pos;
    rule = side == 1 ? c.neg : c.pos;
  } else {
    vol = mesh.tet_volume(t);
    append_tet_rule(x[0], x[1], x[2], x[3], cut.base_order, rule);
  }
  const Tet& k = mesh.tets[t];
  if (stiffness)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        out.add(layout.dof(side, k[j]), layout.dof(side, k[i]), alpha * vol * dot(g[i], g[j]));
  for (const auto& q : rule) {
    const auto l = barycentric(x, q.x);
    const double fw = q.w * data.f(q.x, side);
    for (int j = 0; j < 4; ++j) out.add_load(layout.dof(side, k[j]), fw * l[j]);
  }
}

struct SurfaceMoments {
  std::array<double, 4> first{};                  // ∫ λ_i
  std::array<std::array<double, 4>, 4> second{};  // ∫ λ_i λ_j
};

SurfaceMoments surface_moments(const TetCoords& x, const QuadRule& rule) {
  SurfaceMoments m;
  for (const auto& q : rule) {
    const auto l = barycentric(x, q.x);
    for (int i = 0; i < 4; ++i) {
      m.first[i] += q.w * l[i];
      for (int j = 0; j < 4; ++j) m.second[i][j] += q.w * l[i] * l[j];
    }
  }
  return m;
}

}  // namespace

AssembledSystem assemble_interface(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout,
                                   const ProblemCoefficients& coeffs, const ProblemData& data,
                                   const AssemblyTerms& terms) {
  coeffs.validate();
  if (layout.kind != ProblemKind::Interface) throw std::invalid_argument("assemble_interface: FD layout");
  Collector out(layout);
  const double alpha_bar = coeffs.alpha_bar();

  for (int t = 0; t < mesh.num_tets(); ++t) {
    for (int side = 1; side <= 2; ++side)
      if (cut.in_extended(t, side))
        add_volume_terms(mesh, cut, layout, t, side, coeffs.alpha(side), data, terms.volume, out);
    if (!cut.is_cut(t)) continue;

    const CutTetData& c = cut.cut(t);
    const TetCoords x = tet_coords(mesh, t);
    const auto g = barycentric_gradients(x);
    const auto mom = surface_moments(x, c.surface.rule);
    const double h = mesh.tet_diameter(t);
    const Tet& k = mesh.tets[t];

    // Local unknowns a = 4 * (side - 1) + i.
    std::array<double, 8> jump_sign{}, flux{};
    std::array<DofRef, 8> dofs{};
    for (int s = 0; s < 2; ++s) {
      const double kappa = s == 0 ? c.kappa1 : c.kappa2();
      for (int i = 0; i < 4; ++i) {
        const int a = 4 * s + i;
        jump_sign[a] = s == 0 ? 1.0 : -1.0;
        flux[a] = -kappa * coeffs.alpha(s + 1) * dot(g[i], c.surface.normal);
        dofs[a] = layout.dof(s + 1, k[i]);
      }
    }
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        const int i = a % 4, j = b % 4;
        double v = 0.0;
        if (terms.consistency)
          v += flux[b] * jump_sign[a] * mom.first[i] + flux[a] * jump_sign[b] * mom.first[j];
        if (terms.penalty) v += alpha_bar * coeffs.gamma / h * jump_sign[a] * jump_sign[b] * mom.second[i][j];
        // row = test function b, column = trial function a
        out.add(dofs[b], dofs[a], v);
      }
  }
  if (terms.ghost)
    for (int side = 1; side <= 2; ++side) add_ghost_penalty(mesh, cut, layout, side, coeffs.beta, out);
  return std::move(out).finish(mesh, data);
}

AssembledSystem assemble_fd(const Mesh& mesh, const CutInfo& cut, const DofLayout& layout,
                            const ProblemCoefficients& coeffs, const ProblemData& data,
                            const AssemblyTerms& terms) {
  coeffs.validate();
  if (layout.kind != ProblemKind::Fictitious) throw std::invalid_argument("assemble_fd: interface layout");
  Collector out(layout);

  for (int t = 0; t < mesh.num_tets(); ++t) {
    if (!cut.in_extended(t, 1)) continue;
    add_volume_terms(mesh, cut, layout, t, 1, 1.0, data, terms.volume, out);
    if (!cut.is_cut(t)) continue;

    const CutTetData& c = cut.cut(t);
    const TetCoords x = tet_coords(mesh, t);
    const auto g = barycentric_gradients(x);
    const auto mom = surface_moments(x, c.surface.rule);
    const double h = mesh.tet_diameter(t);
    const Tet& k = mesh.tets[t];
    std::array<double, 4> dn{};
    for (int i = 0; i < 4; ++i) dn[i] = dot(g[i], c.surface.normal);

    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = 0.0;
        if (terms.consistency) v -= dn[i] * mom.first[j] + dn[j] * mom.first[i];
        if (terms.penalty) v += coeffs.gamma / h * mom.second[i][j];
        out.add(layout.dof(1, k[j]), layout.dof(1, k[i]), v);
      }
    // -(g, n.grad v) + gamma (h^{-1} g, v) on T ∩ Gamma
    for (const auto& q : c.surface.rule) {
      const auto l = barycentric(x, q.x);
      const double gw = q.w * data.g(q.x, 1);
      for (int j = 0; j < 4; ++j) {
        double v = 0.0;
        if (terms.consistency) v -= gw * dn[j];
        if (terms.penalty) v += coeffs.gamma / h * gw * l[j];
        out.add_load(layout.dof(1, k[j]), v);
      }
    }
  }
  if (terms.ghost) add_ghost_penalty(mesh, cut, layout, 1, coeffs.beta, out);
  return std::move(out).finish(mesh, data);
}

SparseMatrix assemble_p1_laplacian(const Mesh& mesh, std::span<const int> vertices, double alpha) {
  std::vector<int> index(mesh.num_vertices(), -1);
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) index[vertices[i]] = i;
  std::vector<Triplet> e;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetCoords x = tet_coords(mesh, t);
    const auto g = barycentric_gradients(x);
    const double vol = mesh.tet_volume(t);
    const Tet& k = mesh.tets[t];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (index[k[i]] >= 0 && index[k[j]] >= 0) e.push_back({index[k[i]], index[k[j]], alpha * vol * dot(g[i], g[j])});
  }
  const int n = static_cast<int>(vertices.size());
  return SparseMatrix::from_triplets(n, n, std::move(e));
}

SparseMatrix build_L(const DofLayout& layout) {
  const int n = layout.num_free();
  std::vector<Triplet> e;
  e.reserve(2 * n);
  for (int side = 1; side <= 2; ++side) {
    const auto& fd = layout.free_dof[side - 1];
    for (int v = 0; v < layout.num_vertices; ++v) {
      const int row = fd[v];
      if (row < 0) continue;
      if (const int i0 = layout.x0_index[v]; i0 >= 0) e.push_back({row, i0, 1.0});
      if (layout.x1_on_side[side - 1][v]) e.push_back({row, layout.N0() + layout.x1_index[v], 1.0});
    }
  }
  return SparseMatrix::from_triplets(n, layout.N0() + layout.N1(), std::move(e));
}

TransformedSystem transform(const SparseMatrix& A, const Vector& b, const SparseMatrix& L, int N0) {
  if (A.rows() != L.rows() || static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("transform: dimension mismatch");
  TransformedSystem s;
  s.A = A;
  s.L = L;
  s.Ahat = galerkin_product(A, L);
  const SparseMatrix Lt = L.transpose();
  s.bhat = Lt * b;
  s.N0 = N0;
  s.N1 = L.cols() - N0;
  std::vector<int> i0(s.N0), i1(s.N1);
  for (int i = 0; i < s.N0; ++i) i0[i] = i;
  for (int i = 0; i < s.N1; ++i) i1[i] = s.N0 + i;
  s.A0 = s.Ahat.submatrix(i0, i0);
  s.A1 = s.Ahat.submatrix(i1, i1);
  s.D1 = s.A1.diagonal();
  for (double d : s.D1)
    if (!(d > 0.0)) throw std::domain_error("transform: non-positive diagonal in A1 (indefinite assembly)");
  return s;
}

std::array<Vector, 2> side_vertex_values(const DofLayout& layout, std::span<const double> x_free,
                                         std::span<const double> fixed_values) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::array<Vector, 2> u{Vector(layout.num_vertices, nan), Vector(layout.num_vertices, nan)};
  for (int side = 0; side < 2; ++side)
    for (int v = 0; v < layout.num_vertices; ++v) {
      if (const int f = layout.free_dof[side][v]; f >= 0) u[side][v] = x_free[f];
      else if (const int c = layout.fixed_dof[side][v]; c >= 0) u[side][v] = fixed_values[c];
    }
  return u;
}

}  // namespace cutfem
