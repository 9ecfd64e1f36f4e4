#include "cutfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cutfem {

namespace {

void add_s31(TetRule& r, double a, double w) {
  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> l{a, a, a, a};
    l[k] = 1.0 - 3.0 * a;
    r.points.push_back(l);
    r.weights.push_back(w);
  }
}

void add_s22(TetRule& r, double a, double w) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::array<double, 4> l{0.5 - a, 0.5 - a, 0.5 - a, 0.5 - a};
      l[i] = a;
      l[j] = a;
      r.points.push_back(l);
      r.weights.push_back(w);
    }
}

void add_s21(TriangleRule& r, double a, double w) {
  for (int k = 0; k < 3; ++k) {
    std::array<double, 3> l{a, a, a};
    l[k] = 1.0 - 2.0 * a;
    r.points.push_back(l);
    r.weights.push_back(w);
  }
}

TetRule make_tet_centroid() {
  TetRule r;
  r.degree = 1;
  r.points.push_back({0.25, 0.25, 0.25, 0.25});
  r.weights.push_back(1.0);
  return r;
}

TetRule make_tet_degree2() {
  TetRule r;
  r.degree = 2;
  add_s31(r, 0.1381966011250105, 0.25);
  return r;
}

// 14-point rule, degree 5, all weights positive.
TetRule make_tet_degree5() {
  TetRule r;
  r.degree = 5;
  add_s31(r, 0.09273525031089123, 0.07349304311636196);
  add_s31(r, 0.31088591926330061, 0.11268792571801585);
  add_s22(r, 0.04550370412564965, 0.04254602077708147);
  return r;
}

TriangleRule make_tri_centroid() {
  TriangleRule r;
  r.degree = 1;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(1.0);
  return r;
}

TriangleRule make_tri_degree2() {
  TriangleRule r;
  r.degree = 2;
  add_s21(r, 1.0 / 6.0, 1.0 / 3.0);
  return r;
}

// Dunavant 7-point rule, degree 5.
TriangleRule make_tri_degree5() {
  TriangleRule r;
  r.degree = 5;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.225);
  add_s21(r, 0.470142064105115, 0.132394152788506);
  add_s21(r, 0.101286507323456, 0.125939180544827);
  return r;
}

}  // namespace

const TetRule& tet_rule(int order) {
  static const TetRule r1 = make_tet_centroid();
  static const TetRule r2 = make_tet_degree2();
  static const TetRule r5 = make_tet_degree5();
  if (order <= 1) return r1;
  if (order == 2) return r2;
  if (order <= 5) return r5;
  throw std::invalid_argument("tet_rule: order > 5 not available");
}

const TriangleRule& triangle_rule(int order) {
  static const TriangleRule r1 = make_tri_centroid();
  static const TriangleRule r2 = make_tri_degree2();
  static const TriangleRule r5 = make_tri_degree5();
  if (order <= 1) return r1;
  if (order == 2) return r2;
  if (order <= 5) return r5;
  throw std::invalid_argument("triangle_rule: order > 5 not available");
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  return 0.5 * std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
}

void append_tet_rule(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, int order,
                     QuadRule& out) {
  const double vol = std::abs(signed_volume(a, b, c, d));
  const TetRule& r = tet_rule(order);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const auto& l = r.points[q];
    QuadPoint p;
    for (int k = 0; k < 3; ++k) p.x[k] = l[0] * a[k] + l[1] * b[k] + l[2] * c[k] + l[3] * d[k];
    p.w = r.weights[q] * vol;
    out.push_back(p);
  }
}

void append_triangle_rule(const Vec3& a, const Vec3& b, const Vec3& c, int order, QuadRule& out) {
  const double area = triangle_area(a, b, c);
  const TriangleRule& r = triangle_rule(order);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const auto& l = r.points[q];
    QuadPoint p;
    for (int k = 0; k < 3; ++k) p.x[k] = l[0] * a[k] + l[1] * b[k] + l[2] * c[k];
    p.w = r.weights[q] * area;
    out.push_back(p);
  }
}

}  // namespace cutfem
