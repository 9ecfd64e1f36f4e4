#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cutfem/mesh.hpp"
#include "doctest.h"

using namespace cutfem;

namespace {

const Box kBox{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) v += m.tet_volume(t);
  return v;
}

}  // namespace

TEST_CASE("initial mesh counts and orientation") {
  const Mesh m = build_initial_mesh(4, kBox);
  CHECK(m.num_vertices() == 125);
  CHECK(m.num_tets() == 384);
  CHECK(m.cube_edge() == doctest::Approx(0.75));
  for (int t = 0; t < m.num_tets(); ++t) CHECK(m.signed_volume(t) > 0.0);
  CHECK(total_volume(m) == doctest::Approx(27.0).epsilon(1e-13));
  int interior = 0;
  for (char b : m.boundary_vertex) interior += !b;
  CHECK(interior == 27);
}

TEST_CASE("initial mesh rejects bad input") {
  CHECK_THROWS_AS(build_initial_mesh(0, kBox), std::invalid_argument);
  CHECK_THROWS_AS(build_initial_mesh(2, Box{{0, 0, 0}, {1, 0, 1}}), std::invalid_argument);
}

TEST_CASE("facet counts match Euler-type identities") {
  const Mesh m = build_initial_mesh(4, kBox);
  int boundary = 0;
  for (const auto& f : m.facets) boundary += f.is_boundary();
  // 4 faces per tet, interior facets counted twice.
  CHECK(4 * m.num_tets() == 2 * (static_cast<int>(m.facets.size()) - boundary) + boundary);
  // Each square boundary face splits into 2 triangles.
  CHECK(boundary == 6 * 16 * 2);
  for (const auto& f : m.facets) CHECK(std::abs(std::hypot(f.normal[0], f.normal[1], f.normal[2]) - 1.0) < 1e-14);
}

TEST_CASE("refinement: volumes, counts, nesting and vertex parents") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 2);
  REQUIRE(h.levels.size() == 3);
  for (int l = 0; l <= 2; ++l) {
    const Mesh& m = h.levels[l];
    const int n = 4 << l;
    CHECK(m.num_tets() == 384 * (1 << (3 * l)));
    CHECK(m.num_vertices() == (n + 1) * (n + 1) * (n + 1));
    CHECK(total_volume(m) == doctest::Approx(27.0).epsilon(1e-12));
    for (int t = 0; t < m.num_tets(); ++t) CHECK(m.signed_volume(t) > 0.0);
  }
  for (int l = 0; l < 2; ++l) {
    const Mesh& c = h.levels[l];
    const Mesh& f = h.levels[l + 1];
    // Children volumes sum to the parent volume.
    for (int t = 0; t < c.num_tets(); ++t) {
      double s = 0.0;
      for (int k : h.child_maps[l][t]) s += f.tet_volume(k);
      CHECK(s == doctest::Approx(c.tet_volume(t)).epsilon(1e-12));
    }
    // Coarse vertices keep their ids; midpoints sit between their parents.
    for (int v = 0; v < f.num_vertices(); ++v) {
      const auto [a, b] = h.vertex_parents[l][v];
      for (int k = 0; k < 3; ++k) CHECK(f.vertices[v][k] == doctest::Approx(0.5 * (c.vertices[a][k] + c.vertices[b][k])));
      if (v < c.num_vertices()) CHECK(a == v);
    }
  }
}

TEST_CASE("refined mesh stays Kuhn: every tet spans exactly one lattice cube with its main diagonal") {
  const MeshHierarchy h = build_hierarchy(4, kBox, 2);
  const Mesh& m = h.levels[2];
  std::map<std::array<std::int64_t, 3>, int> per_cube;
  for (const Tet& t : m.tets) {
    std::array<std::int64_t, 3> lo{}, hi{};
    for (int k = 0; k < 3; ++k) {
      lo[k] = hi[k] = m.lattice[t[0]][k];
      for (int i = 1; i < 4; ++i) {
        lo[k] = std::min(lo[k], m.lattice[t[i]][k]);
        hi[k] = std::max(hi[k], m.lattice[t[i]][k]);
      }
      CHECK(hi[k] - lo[k] == 1);
    }
    bool has_lo = false, has_hi = false;
    for (int i = 0; i < 4; ++i) {
      has_lo |= m.lattice[t[i]] == lo;
      has_hi |= m.lattice[t[i]] == hi;
    }
    CHECK(has_lo);
    CHECK(has_hi);
    ++per_cube[lo];
  }
  for (const auto& [cube, count] : per_cube) CHECK(count == 6);
}

TEST_CASE("facet builder detects non-manifold input") {
  Mesh m = build_initial_mesh(1, Box{{0, 0, 0}, {1, 1, 1}});
  m.tets.push_back(m.tets[0]);
  CHECK_THROWS_AS(build_facets(m), StructuralError);
}

TEST_CASE("ascii mesh dump") {
  const Mesh m = build_initial_mesh(1, Box{{0, 0, 0}, {1, 1, 1}});
  std::ostringstream os;
  write_mesh_ascii(m, os);
  const std::string s = os.str();
  CHECK(s.rfind("cutfem-mesh 1", 0) == 0);
  CHECK(s.find("vertices 8") != std::string::npos);
  CHECK(s.find("tets 6") != std::string::npos);
}
