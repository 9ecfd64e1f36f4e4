#pragma once

#include <array>
#include <vector>

#include "cutfem/mesh.hpp"

namespace cutfem {

struct QuadPoint {
  Vec3 x{};
  double w = 0.0;
};

using QuadRule = std::vector<QuadPoint>;

/// Symmetric rule on a simplex in barycentric coordinates; weights sum to 1.
template <int N>
struct BarycentricRule {
  int degree = 0;
  std::vector<std::array<double, N>> points;
  std::vector<double> weights;
};

using TetRule = BarycentricRule<4>;
using TriangleRule = BarycentricRule<3>;

/// Positive-weight tetrahedron rule exact for polynomials of degree >= order
/// (orders up to 5 are available).
const TetRule& tet_rule(int order);
/// Positive-weight triangle rule exact for polynomials of degree >= order (up to 5).
const TriangleRule& triangle_rule(int order);

/// Appends the rule mapped onto tet (a,b,c,d); weights scaled by its volume.
void append_tet_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, int order,
                     QuadRule& out);
/// Appends the rule mapped onto triangle (a,b,c); weights scaled by its area.
void append_triangle_rule(const Vec3& a, const Vec3& b, const Vec3& c, int order, QuadRule& out);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

inline double rule_weight(const QuadRule& q) {
  double s = 0.0;
  for (const auto& p : q) s += p.w;
  return s;
}

}  // namespace cutfem
