#include <algorithm>
#include <random>

#include "cutfem/space.hpp"
#include "cutfem/simplex.hpp"
#include "doctest.h"

using namespace cutfem;

namespace {

const Box kBox{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
const Vec3 kCenter{0.001, 0.002, 0.003};

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
  return c.empty();
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
  return c;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
  return c;
}

}  // namespace

TEST_CASE("interface dimensions on levels 0-2") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 2);
  const int expected[3][2] = {{27, 27}, {343, 208}, {3375, 844}};
  for (int l = 0; l <= 2; ++l) {
    const Mesh& m = h.levels[l];
    const CutInfo c = build_cut_info(m, LevelSet::sphere(kCenter, 1.0));
    const IndexSets s = build_index_sets(m, c, ProblemKind::Interface);
    const DofLayout d = build_dof_layout(s, m.num_vertices());
    CHECK(d.N0() == expected[l][0]);
    CHECK(d.N1() == expected[l][1]);
    CHECK(d.num_free() == d.N0() + d.N1());

    // Disjoint partitions.
    CHECK(disjoint(s.IGammaSide[0], s.IGammaSide[1]));
    CHECK(set_union(s.IGammaSide[0], s.IGammaSide[1]) == s.IGamma);
    const auto p1 = set_minus(s.I[0], s.IGammaSide[0]);
    const auto p2 = set_minus(s.I[1], s.IGammaSide[1]);
    CHECK(disjoint(p1, p2));
    CHECK(set_union(p1, p2) == s.I0);
    for (int v : s.IGammaSide[0]) CHECK(!c.signs.negative[v]);
    for (int v : s.IGammaSide[1]) CHECK(c.signs.negative[v]);
  }
}

TEST_CASE("fictitious domain dimensions on level 0") {
  const Mesh m = build_initial_mesh(4, kBox);
  const CutInfo c = build_cut_info(m, LevelSet::sphere(kCenter, 1.0));
  const IndexSets s = build_index_sets(m, c, ProblemKind::Fictitious);
  const DofLayout d = build_dof_layout(s, m.num_vertices());
  CHECK(d.N0() == 7);
  CHECK(d.N1() == 44);
  CHECK(s.I[1].empty());
  for (int v : d.x0_vertices) CHECK(c.signs.negative[v]);
}

TEST_CASE("free ordering lists I_i \\ IGamma_i before IGamma_i on each side") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 1);
  const Mesh& m = h.levels[1];
  const CutInfo c = build_cut_info(m, LevelSet::sphere(kCenter, 1.0));
  const IndexSets s = build_index_sets(m, c, ProblemKind::Interface);
  const DofLayout d = build_dof_layout(s, m.num_vertices());
  int last_side = 1;
  bool seen_gamma = false;
  for (const auto& [side, v] : d.free_owner) {
    if (side != last_side) {
      CHECK(side == 2);
      last_side = side;
      seen_gamma = false;
    }
    const bool gamma = d.x1_on_side[side - 1][v];
    if (seen_gamma) CHECK(gamma);
    seen_gamma |= gamma;
  }
  for (int side = 1; side <= 2; ++side)
    for (int v : s.fixed[side - 1]) {
      const DofRef r = d.dof(side, v);
      CHECK(r.fixed);
      CHECK(m.boundary_vertex[v]);
    }
}

TEST_CASE("nodal basis reproduces affine functions") {
  const TetCoords x{Vec3{0.1, 0.2, -0.3}, Vec3{1.2, 0.1, 0.0}, Vec3{0.3, 1.1, 0.2}, Vec3{0.2, 0.4, 0.9}};
  auto u = [](const Vec3& p) { return 1.5 - 2.0 * p[0] + 0.25 * p[1] + 3.0 * p[2]; };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    std::array<double, 4> l{U(rng), U(rng), U(rng), U(rng)};
    const double s = l[0] + l[1] + l[2] + l[3];
    Vec3 p{0, 0, 0};
    for (int i = 0; i < 4; ++i) p = p + (l[i] / s) * x[i];
    const BasisEval b = evaluate_basis(x, p);
    double val = 0.0, sum = 0.0;
    Vec3 grad{0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      val += b.values[i] * u(x[i]);
      sum += b.values[i];
      grad = grad + u(x[i]) * b.gradients[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(val == doctest::Approx(u(p)).epsilon(1e-13));
    CHECK(grad[0] == doctest::Approx(-2.0));
    CHECK(grad[1] == doctest::Approx(0.25));
    CHECK(grad[2] == doctest::Approx(3.0));
  }
  CHECK_THROWS_AS(evaluate_basis(x, Vec3{5, 5, 5}), std::invalid_argument);
}

TEST_CASE("fictitious domain N1 grows by a factor 3 to 5 per level") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 3);
  std::vector<int> n1;
  for (const Mesh& m : h.levels) {
    const CutInfo c = build_cut_info(m, LevelSet::sphere(kCenter, 1.0));
    n1.push_back(build_dof_layout(build_index_sets(m, c, ProblemKind::Fictitious), m.num_vertices()).N1());
  }
  for (std::size_t l = 2; l < n1.size(); ++l) {
    INFO("level " << l);
    CHECK(n1[l] >= 3 * n1[l - 1]);
    CHECK(n1[l] <= 5 * n1[l - 1]);
  }
}
