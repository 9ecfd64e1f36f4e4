#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "cutfem/mesh.hpp"
#include "cutfem/quadrature.hpp"
#include "cutfem/simplex.hpp"

namespace cutfem {

/// Signed level set; Omega_1 = {phi < 0}, Omega_2 = {phi > 0}.
struct LevelSet {
  std::function<double(const Vec3&)> value;

  double operator()(const Vec3& x) const { return value(x); }

  /// phi(x) = |x - center| - radius.
  static LevelSet sphere(const Vec3& center, double radius);
};

enum class CutClass : std::uint8_t { Neg, Pos, Cut };

/// Relative tie tolerance: |phi(v)| < kSnapTolerance * h is treated as phi < 0.
inline constexpr double kSnapTolerance = 1e-12;

/// Vertex values of the piecewise linear interpolant after snapping.
struct VertexSigns {
  std::vector<double> phi;  // snapped: never exactly zero
  std::vector<char> negative;
};

VertexSigns snap_vertex_values(const Mesh& mesh, const LevelSet& phi);

/// Classification of tet t from the (snapped) vertex values.
CutClass classify_tet(const Tet& tet, const VertexSigns& signs);
std::vector<CutClass> classify(const Mesh& mesh, const VertexSigns& signs);

struct CutVolumeRules {
  QuadRule neg;  // T ∩ {phi_h < 0}
  QuadRule pos;  // T ∩ {phi_h > 0}
  double vol_neg = 0.0;
  double vol_pos = 0.0;
};

/// Sub-tessellates the tet along the zero plane of the linear interpolant of
/// `phi` and maps a rule of the given order onto every sub-tet.  Uncut tets
/// get the standard rule on the side they belong to.  `phi` must be snapped
/// (no zeros).
CutVolumeRules cut_volume_rule(const TetCoords& x, const std::array<double, 4>& phi, int order);

/// The same sub-tessellation as a list of sub-tets, for tests and oracles.
struct SubTets {
  std::vector<TetCoords> neg;
  std::vector<TetCoords> pos;
};
SubTets cut_sub_tets(const TetCoords& x, const std::array<double, 4>& phi);

struct InterfaceRule {
  QuadRule rule;
  Vec3 normal{};  // unit, from {phi_h < 0} into {phi_h > 0}
  double area = 0.0;
};

/// Rule on the planar piece {phi_h = 0} ∩ T (triangle or quadrilateral split
/// in two).  Requires a cut tet.
InterfaceRule interface_rule(const TetCoords& x, const std::array<double, 4>& phi, int order);

struct CutTetData {
  CutVolumeRules volume;
  InterfaceRule surface;
  double kappa1 = 0.0;  // |T ∩ Omega_1| / |T|
  double kappa2() const { return 1.0 - kappa1; }
};

/// Per-mesh cut information for one level set.
struct CutInfo {
  int base_order = 4;
  VertexSigns signs;
  std::vector<CutClass> classes;
  std::vector<int> cut_index;  // tet -> index into cut_data, or -1
  std::vector<CutTetData> cut_data;
  std::array<std::vector<int>, 2> ghost_facets;  // F_{g,1}, F_{g,2}

  bool is_cut(int t) const { return classes[t] == CutClass::Cut; }
  /// True if tet t has nonzero intersection with Omega_side (side = 1 or 2).
  bool in_extended(int t, int side) const {
    return side == 1 ? classes[t] != CutClass::Pos : classes[t] != CutClass::Neg;
  }
  const CutTetData& cut(int t) const;
  int num_cut() const { return static_cast<int>(cut_data.size()); }
};

CutInfo build_cut_info(const Mesh& mesh, const LevelSet& phi, int base_order = 4);

/// Interior facets whose two neighbours both lie in the extended subdomain of
/// `side` and at least one of which is cut.
std::vector<int> ghost_facets(const Mesh& mesh, const std::vector<CutClass>& classes, int side);

}  // namespace cutfem
