#include "cutfem/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace cutfem {

namespace {

std::vector<int> collect(const std::vector<char>& flags) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(flags.size()); ++v)
    if (flags[v]) out.push_back(v);
  return out;
}

bool disjoint_union_equals(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& u) {
  std::vector<int> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
  if (!inter.empty()) return false;
  std::vector<int> uni;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
  return uni == u;
}

std::vector<int> difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

IndexSets build_index_sets(const Mesh& mesh, const CutInfo& cut, ProblemKind kind) {
  const int nv = mesh.num_vertices();
  const bool interface = kind == ProblemKind::Interface;
  std::array<std::vector<char>, 2> in_ext{std::vector<char>(nv, 0), std::vector<char>(nv, 0)};
  std::vector<char> in_strip(nv, 0);
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int v : mesh.tets[t]) {
      if (cut.in_extended(t, 1)) in_ext[0][v] = 1;
      if (cut.in_extended(t, 2)) in_ext[1][v] = 1;
      if (cut.is_cut(t)) in_strip[v] = 1;
    }

  IndexSets s;
  s.kind = kind;
  const int nsides = interface ? 2 : 1;
  std::vector<char> free_vertex(nv, 1);
  if (interface)
    for (int v = 0; v < nv; ++v) free_vertex[v] = !mesh.boundary_vertex[v];

  for (int side = 0; side < nsides; ++side) {
    std::vector<char> keep(nv, 0), fix(nv, 0);
    for (int v = 0; v < nv; ++v) {
      keep[v] = in_ext[side][v] && free_vertex[v];
      fix[v] = in_ext[side][v] && !free_vertex[v];
    }
    s.I[side] = collect(keep);
    s.fixed[side] = collect(fix);
  }
  std::vector<char> strip(nv, 0), g1(nv, 0), g2(nv, 0);
  for (int v = 0; v < nv; ++v) {
    strip[v] = in_strip[v] && free_vertex[v];
    g1[v] = strip[v] && !cut.signs.negative[v];
    g2[v] = strip[v] && cut.signs.negative[v];
  }
  s.IGammaSide[0] = collect(g1);
  if (interface) {
    s.IGamma = collect(strip);
    s.IGammaSide[1] = collect(g2);
    s.I0 = collect(free_vertex);

    const auto free1 = difference(s.I[0], s.IGammaSide[0]);
    const auto free2 = difference(s.I[1], s.IGammaSide[1]);
    if (!disjoint_union_equals(s.IGammaSide[0], s.IGammaSide[1], s.IGamma))
      throw StructuralError("index sets: IGamma is not the disjoint union of IGamma_1 and IGamma_2");
    if (!disjoint_union_equals(free1, free2, s.I0))
      throw StructuralError("index sets: I0 is not the disjoint union of I1\\IGamma1 and I2\\IGamma2");
    if (!std::includes(free1.begin(), free1.end(), s.IGammaSide[1].begin(), s.IGammaSide[1].end()))
      throw StructuralError("index sets: IGamma2 not contained in I1\\IGamma1");
  } else {
    s.IGamma = s.IGammaSide[0];
    s.I0 = difference(s.I[0], s.IGammaSide[0]);
    for (int v : s.I0)
      if (!cut.signs.negative[v]) throw StructuralError("index sets: FD interior dof outside Omega_1");
  }
  return s;
}

DofLayout build_dof_layout(const IndexSets& s, int nv) {
  DofLayout d;
  d.kind = s.kind;
  d.num_vertices = nv;
  const int nsides = s.kind == ProblemKind::Interface ? 2 : 1;
  for (int side = 0; side < 2; ++side) {
    d.free_dof[side].assign(nv, -1);
    d.fixed_dof[side].assign(nv, -1);
    d.x1_on_side[side].assign(nv, 0);
  }
  for (int side = 0; side < nsides; ++side) {
    const auto inner = difference(s.I[side], s.IGammaSide[side]);
    for (const auto* block : {&inner, &s.IGammaSide[side]})
      for (int v : *block) {
        d.free_dof[side][v] = d.num_free();
        d.free_owner.push_back({side + 1, v});
      }
    for (int v : s.fixed[side]) {
      d.fixed_dof[side][v] = d.num_fixed();
      d.fixed_owner.push_back({side + 1, v});
    }
    for (int v : s.IGammaSide[side]) d.x1_on_side[side][v] = 1;
  }
  d.x0_vertices = s.I0;
  d.x1_vertices = s.IGamma;
  d.x0_index.assign(nv, -1);
  d.x1_index.assign(nv, -1);
  for (int i = 0; i < d.N0(); ++i) d.x0_index[d.x0_vertices[i]] = i;
  for (int i = 0; i < d.N1(); ++i) d.x1_index[d.x1_vertices[i]] = i;
  if (d.num_free() != d.N0() + d.N1())
    throw StructuralError("dof layout: CutFEM dimension differs from N0 + N1");
  return d;
}

BasisEval evaluate_basis(const TetCoords& x, const Vec3& p) {
  BasisEval e;
  e.values = barycentric(x, p);
  for (double l : e.values)
    if (l < -1e-10) throw std::invalid_argument("evaluate_basis: point outside tet");
  e.gradients = barycentric_gradients(x);
  return e;
}

}  // namespace cutfem
