#include "cutfem/geometry.hpp"

#include <stdexcept>

namespace cutfem {

namespace {

Vec3 edge_root(const Vec3& xa, double fa, const Vec3& xb, double fb) {
  const double t = fa / (fa - fb);
  return xa + t * (xb - xa);
}

// Prism with bottom (a0,a1,a2), top (b0,b1,b2) and a_i--b_i lateral edges.
void split_prism(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0, const Vec3& b1,
                 const Vec3& b2, std::vector<TetCoords>& out) {
  out.push_back({a0, a1, a2, b0});
  out.push_back({a1, a2, b0, b1});
  out.push_back({a2, b0, b1, b2});
}

double sub_volume(const std::vector<TetCoords>& tets) {
  double v = 0.0;
  for (const auto& t : tets) v += std::abs(signed_volume(t[0], t[1], t[2], t[3]));
  return v;
}

void partition_vertices(const std::array<double, 4>& phi, std::vector<int>& neg, std::vector<int>& pos) {
  for (int i = 0; i < 4; ++i) {
    if (phi[i] == 0.0) throw std::invalid_argument("cut geometry: vertex value not snapped");
    (phi[i] < 0.0 ? neg : pos).push_back(i);
  }
}

}  // namespace

LevelSet LevelSet::sphere(const Vec3& center, double radius) {
  return LevelSet{[center, radius](const Vec3& x) { return norm(x - center) - radius; }};
}

VertexSigns snap_vertex_values(const Mesh& mesh, const LevelSet& phi) {
  VertexSigns s;
  const double tie = kSnapTolerance * mesh.cube_edge();
  s.phi.resize(mesh.vertices.size());
  s.negative.resize(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    double f = phi(mesh.vertices[v]);
    if (std::abs(f) < tie) f = -tie;
    s.phi[v] = f;
    s.negative[v] = f < 0.0;
  }
  return s;
}

CutClass classify_tet(const Tet& tet, const VertexSigns& signs) {
  int nneg = 0;
  for (int v : tet) nneg += signs.negative[v] ? 1 : 0;
  if (nneg == 4) return CutClass::Neg;
  if (nneg == 0) return CutClass::Pos;
  return CutClass::Cut;
}

std::vector<CutClass> classify(const Mesh& mesh, const VertexSigns& signs) {
  std::vector<CutClass> c(mesh.tets.size());
  for (int t = 0; t < mesh.num_tets(); ++t) c[t] = classify_tet(mesh.tets[t], signs);
  return c;
}

SubTets cut_sub_tets(const TetCoords& x, const std::array<double, 4>& phi) {
  std::vector<int> neg, pos;
  partition_vertices(phi, neg, pos);
  SubTets s;
  if (pos.empty()) {
    s.neg.push_back(x);
    return s;
  }
  if (neg.empty()) {
    s.pos.push_back(x);
    return s;
  }
  auto root = [&](int i, int j) { return edge_root(x[i], phi[i], x[j], phi[j]); };
  if (neg.size() == 1 || pos.size() == 1) {
    const bool lone_neg = neg.size() == 1;
    const int a = lone_neg ? neg[0] : pos[0];
    const auto& rest = lone_neg ? pos : neg;
    const Vec3 pb = root(a, rest[0]), pc = root(a, rest[1]), pd = root(a, rest[2]);
    std::vector<TetCoords>& corner = lone_neg ? s.neg : s.pos;
    std::vector<TetCoords>& prism = lone_neg ? s.pos : s.neg;
    corner.push_back({x[a], pb, pc, pd});
    split_prism(x[rest[0]], x[rest[1]], x[rest[2]], pb, pc, pd, prism);
    return s;
  }
  // Two against two: both sides are prisms whose quadrilateral faces lie in
  // tet faces or in the cut plane.
  const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
  const Vec3 pac = root(a, c), pad = root(a, d), pbc = root(b, c), pbd = root(b, d);
  split_prism(x[a], pac, pad, x[b], pbc, pbd, s.neg);
  split_prism(x[c], pac, pbc, x[d], pad, pbd, s.pos);
  return s;
}

CutVolumeRules cut_volume_rule(const TetCoords& x, const std::array<double, 4>& phi, int order) {
  const SubTets s = cut_sub_tets(x, phi);
  CutVolumeRules r;
  for (const auto& t : s.neg) append_tet_rule(t[0], t[1], t[2], t[3], order, r.neg);
  for (const auto& t : s.pos) append_tet_rule(t[0], t[1], t[2], t[3], order, r.pos);
  r.vol_neg = sub_volume(s.neg);
  r.vol_pos = sub_volume(s.pos);
  return r;
}

InterfaceRule interface_rule(const TetCoords& x, const std::array<double, 4>& phi, int order) {
  std::vector<int> neg, pos;
  partition_vertices(phi, neg, pos);
  if (neg.empty() || pos.empty()) throw std::invalid_argument("interface_rule: tet is not cut");

  InterfaceRule r;
  const auto g = barycentric_gradients(x);
  Vec3 grad{0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) grad = grad + phi[i] * g[i];
  r.normal = (1.0 / norm(grad)) * grad;

  auto root = [&](int i, int j) { return edge_root(x[i], phi[i], x[j], phi[j]); };
  if (neg.size() == 1 || pos.size() == 1) {
    const int a = neg.size() == 1 ? neg[0] : pos[0];
    const auto& rest = neg.size() == 1 ? pos : neg;
    const Vec3 p0 = root(a, rest[0]), p1 = root(a, rest[1]), p2 = root(a, rest[2]);
    append_triangle_rule(p0, p1, p2, order, r.rule);
    r.area = triangle_area(p0, p1, p2);
  } else {
    const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
    const Vec3 pac = root(a, c), pad = root(a, d), pbc = root(b, c), pbd = root(b, d);
    append_triangle_rule(pac, pad, pbd, order, r.rule);
    append_triangle_rule(pac, pbd, pbc, order, r.rule);
    r.area = triangle_area(pac, pad, pbd) + triangle_area(pac, pbd, pbc);
  }
  return r;
}

const CutTetData& CutInfo::cut(int t) const {
  const int i = cut_index[t];
  if (i < 0) throw StructuralError("CutInfo: no cut rules for tet " + std::to_string(t));
  return cut_data[i];
}

CutInfo build_cut_info(const Mesh& mesh, const LevelSet& phi, int base_order) {
  CutInfo info;
  info.base_order = base_order;
  info.signs = snap_vertex_values(mesh, phi);
  info.classes = classify(mesh, info.signs);
  info.cut_index.assign(mesh.tets.size(), -1);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    if (info.classes[t] != CutClass::Cut) continue;
    const TetCoords x = tet_coords(mesh, t);
    std::array<double, 4> f;
    for (int i = 0; i < 4; ++i) f[i] = info.signs.phi[mesh.tets[t][i]];
    CutTetData d;
    d.volume = cut_volume_rule(x, f, base_order);
    d.surface = interface_rule(x, f, base_order);
    d.kappa1 = d.volume.vol_neg / (d.volume.vol_neg + d.volume.vol_pos);
    info.cut_index[t] = static_cast<int>(info.cut_data.size());
    info.cut_data.push_back(std::move(d));
  }
  info.ghost_facets[0] = ghost_facets(mesh, info.classes, 1);
  info.ghost_facets[1] = ghost_facets(mesh, info.classes, 2);
  return info;
}

std::vector<int> ghost_facets(const Mesh& mesh, const std::vector<CutClass>& classes, int side) {
  const CutClass excluded = side == 1 ? CutClass::Pos : CutClass::Neg;
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& F = mesh.facets[f];
    if (F.is_boundary()) continue;
    const CutClass c0 = classes[F.tets[0]], c1 = classes[F.tets[1]];
    if (c0 == excluded || c1 == excluded) continue;
    if (c0 == CutClass::Cut || c1 == CutClass::Cut) out.push_back(f);
  }
  return out;
}

}  // namespace cutfem
