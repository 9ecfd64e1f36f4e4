#pragma once

#include <array>
#include <cmath>

#include "cutfem/mesh.hpp"

namespace cutfem {

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

using TetCoords = std::array<Vec3, 4>;

inline TetCoords tet_coords(const Mesh& mesh, int t) {
  const Tet& k = mesh.tets[t];
  return {mesh.vertices[k[0]], mesh.vertices[k[1]], mesh.vertices[k[2]], mesh.vertices[k[3]]};
}

/// Gradients of the four barycentric coordinates (constant on the tet).
inline std::array<Vec3, 4> barycentric_gradients(const TetCoords& x) {
  const Vec3 e1 = x[1] - x[0], e2 = x[2] - x[0], e3 = x[3] - x[0];
  // Rows of the inverse Jacobian are the cofactor vectors divided by det.
  const Vec3 c1{e2[1] * e3[2] - e2[2] * e3[1], e2[2] * e3[0] - e2[0] * e3[2], e2[0] * e3[1] - e2[1] * e3[0]};
  const Vec3 c2{e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2], e3[0] * e1[1] - e3[1] * e1[0]};
  const Vec3 c3{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
  const double det = dot(e1, c1);
  std::array<Vec3, 4> g;
  g[1] = (1.0 / det) * c1;
  g[2] = (1.0 / det) * c2;
  g[3] = (1.0 / det) * c3;
  g[0] = -1.0 * (g[1] + g[2] + g[3]);
  return g;
}

/// Barycentric coordinates of point p with respect to tet x.
inline std::array<double, 4> barycentric(const TetCoords& x, const Vec3& p) {
  const auto g = barycentric_gradients(x);
  std::array<double, 4> l;
  const Vec3 d = p - x[0];
  l[1] = dot(g[1], d);
  l[2] = dot(g[2], d);
  l[3] = dot(g[3], d);
  l[0] = 1.0 - l[1] - l[2] - l[3];
  return l;
}

}  // namespace cutfem
