#include "cutfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

namespace cutfem {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double dist2(const Vec3& a, const Vec3& b) {
  const Vec3 d = sub(a, b);
  return dot(d, d);
}

Vec3 lattice_position(const Box& box, int m, const Lattice3& l) {
  Vec3 x;
  for (int a = 0; a < 3; ++a) x[a] = box.lo[a] + static_cast<double>(l[a]) * (box.extent(a) / m);
  return x;
}

void orient_positive(const std::vector<Vec3>& vertices, Tet& t) {
  if (signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]) < 0.0)
    std::swap(t[2], t[3]);
}

std::vector<char> flag_box_boundary(const std::vector<Lattice3>& lattice, int m) {
  std::vector<char> flags(lattice.size(), 0);
  for (std::size_t v = 0; v < lattice.size(); ++v)
    for (int a = 0; a < 3; ++a)
      if (lattice[v][a] == 0 || lattice[v][a] == m) flags[v] = 1;
  return flags;
}

}  // namespace

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(sub(b, a), cross(sub(c, a), sub(d, a))) / 6.0;
}

double Mesh::signed_volume(int t) const {
  const Tet& k = tets[t];
  return cutfem::signed_volume(vertices[k[0]], vertices[k[1]], vertices[k[2]], vertices[k[3]]);
}

double Mesh::tet_volume(int t) const { return std::abs(signed_volume(t)); }

double Mesh::tet_diameter(int t) const {
  const Tet& k = tets[t];
  double d2 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d2 = std::max(d2, dist2(vertices[k[i]], vertices[k[j]]));
  return std::sqrt(d2);
}

Mesh build_initial_mesh(int n, const Box& box) {
  if (n < 1) throw std::invalid_argument("build_initial_mesh: n_per_axis must be >= 1");
  for (int a = 0; a < 3; ++a)
    if (!(box.extent(a) > 0.0)) throw std::invalid_argument("build_initial_mesh: degenerate box");

  Mesh mesh;
  mesh.box = box;
  mesh.cells_per_axis = n;
  mesh.level = 0;
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };

  mesh.lattice.resize(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) mesh.lattice[vid(i, j, k)] = {i, j, k};
  mesh.vertices.reserve(mesh.lattice.size());
  for (const auto& l : mesh.lattice) mesh.vertices.push_back(lattice_position(box, n, l));
  mesh.boundary_vertex = flag_box_boundary(mesh.lattice, n);

  // Paths (0,0,0) -> e_a -> e_a + e_b -> (1,1,1) over all axis permutations.
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  mesh.tets.reserve(static_cast<std::size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          Tet t;
          t[0] = vid(c[0], c[1], c[2]);
          ++c[p[0]];
          t[1] = vid(c[0], c[1], c[2]);
          ++c[p[1]];
          t[2] = vid(c[0], c[1], c[2]);
          ++c[p[2]];
          t[3] = vid(c[0], c[1], c[2]);
          orient_positive(mesh.vertices, t);
          mesh.tets.push_back(t);
        }
  build_facets(mesh);
  return mesh;
}

void build_facets(Mesh& mesh) {
  struct Entry {
    std::array<int, 3> key;
    int tet;
    int opposite;  // local vertex not on the facet
  };
  std::vector<Entry> entries;
  entries.reserve(mesh.tets.size() * 4);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Tet& k = mesh.tets[t];
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key{};
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != f) key[m++] = k[i];
      std::sort(key.begin(), key.end());
      entries.push_back({key, t, k[f]});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.key, a.tet) < std::tie(b.key, b.tet);
  });

  mesh.facets.clear();
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].key == entries[i].key) ++j;
    if (j - i > 2) throw StructuralError("build_facets: facet shared by more than two tets");
    Facet f;
    f.vertices = entries[i].key;
    f.tets[0] = entries[i].tet;
    if (j - i == 2) {
      f.tets[1] = entries[i + 1].tet;
    } else {
      for (int v : f.vertices)
        if (!mesh.boundary_vertex[v])
          throw StructuralError("build_facets: unmatched facet in the interior (nonconforming mesh)");
    }
    const Vec3& a = mesh.vertices[f.vertices[0]];
    Vec3 n = cross(sub(mesh.vertices[f.vertices[1]], a), sub(mesh.vertices[f.vertices[2]], a));
    const double len = std::sqrt(dot(n, n));
    for (double& c : n) c /= len;
    if (dot(n, sub(mesh.vertices[entries[i].opposite], a)) > 0.0)
      for (double& c : n) c = -c;
    f.normal = n;
    mesh.facets.push_back(f);
    i = j;
  }
}

Refinement refine_uniform(const Mesh& coarse) {
  Refinement r;
  Mesh& fine = r.fine;
  fine.box = coarse.box;
  fine.cells_per_axis = 2 * coarse.cells_per_axis;
  fine.level = coarse.level + 1;
  const int m = fine.cells_per_axis;

  fine.lattice.reserve(coarse.lattice.size() * 8);
  for (const auto& l : coarse.lattice) {
    fine.lattice.push_back({2 * l[0], 2 * l[1], 2 * l[2]});
    r.vertex_parents.push_back({static_cast<int>(r.vertex_parents.size()),
                                static_cast<int>(r.vertex_parents.size())});
  }

  std::map<std::pair<int, int>, int> midpoint;
  auto edge_vertex = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, inserted] = midpoint.try_emplace(key, static_cast<int>(fine.lattice.size()));
    if (inserted) {
      const Lattice3& la = coarse.lattice[key.first];
      const Lattice3& lb = coarse.lattice[key.second];
      fine.lattice.push_back({la[0] + lb[0], la[1] + lb[1], la[2] + lb[2]});
      r.vertex_parents.push_back({key.first, key.second});
    }
    return it->second;
  };

  fine.tets.reserve(coarse.tets.size() * 8);
  r.children.reserve(coarse.tets.size());
  for (int t = 0; t < coarse.num_tets(); ++t) {
    // Order vertices by lattice coordinate sum; for Kuhn tets this recovers
    // the monotone path ordering.
    Tet p = coarse.tets[t];
    auto lsum = [&](int v) {
      const Lattice3& l = coarse.lattice[v];
      return l[0] + l[1] + l[2];
    };
    std::sort(p.begin(), p.end(),
              [&](int a, int b) { return std::make_pair(lsum(a), a) < std::make_pair(lsum(b), b); });

    // Shortest octahedron diagonal; ties resolved in the order listed.
    const std::array<std::array<int, 4>, 3> diagonals{{{0, 2, 1, 3}, {0, 3, 1, 2}, {0, 1, 2, 3}}};
    auto mid = [&](int a, int b) {
      const Vec3& x = coarse.vertices[a];
      const Vec3& y = coarse.vertices[b];
      return Vec3{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1]), 0.5 * (x[2] + y[2])};
    };
    int best = 0;
    double best_len = 0.0;
    for (int d = 0; d < 3; ++d) {
      const auto& q = diagonals[d];
      const double len = dist2(mid(p[q[0]], p[q[1]]), mid(p[q[2]], p[q[3]]));
      if (d == 0 || len < best_len * (1.0 - 1e-12)) {
        best = d;
        best_len = len;
      }
    }
    // Relabel so the chosen diagonal joins midpoints of edges (0,2) and (1,3).
    Tet q = p;
    if (best == 1) q = {p[0], p[1], p[3], p[2]};
    if (best == 2) q = {p[0], p[2], p[1], p[3]};

    const int x0 = q[0], x1 = q[1], x2 = q[2], x3 = q[3];
    const int x01 = edge_vertex(x0, x1), x02 = edge_vertex(x0, x2), x03 = edge_vertex(x0, x3);
    const int x12 = edge_vertex(x1, x2), x13 = edge_vertex(x1, x3), x23 = edge_vertex(x2, x3);
    const std::array<Tet, 8> kids{{{x0, x01, x02, x03},
                                   {x01, x1, x12, x13},
                                   {x02, x12, x2, x23},
                                   {x03, x13, x23, x3},
                                   {x01, x02, x03, x13},
                                   {x01, x02, x12, x13},
                                   {x02, x03, x13, x23},
                                   {x02, x12, x13, x23}}};
    std::array<int, 8> ids{};
    for (int c = 0; c < 8; ++c) {
      ids[c] = static_cast<int>(fine.tets.size());
      fine.tets.push_back(kids[c]);
    }
    r.children.push_back(ids);
  }

  fine.vertices.reserve(fine.lattice.size());
  for (const auto& l : fine.lattice) fine.vertices.push_back(lattice_position(fine.box, m, l));
  for (Tet& k : fine.tets) orient_positive(fine.vertices, k);
  fine.boundary_vertex = flag_box_boundary(fine.lattice, m);
  build_facets(fine);
  return r;
}

MeshHierarchy build_hierarchy(int n_per_axis, const Box& box, int max_level) {
  if (max_level < 0) throw std::invalid_argument("build_hierarchy: max_level must be >= 0");
  MeshHierarchy h;
  h.levels.push_back(build_initial_mesh(n_per_axis, box));
  for (int l = 0; l < max_level; ++l) {
    Refinement r = refine_uniform(h.levels.back());
    h.child_maps.push_back(std::move(r.children));
    h.vertex_parents.push_back(std::move(r.vertex_parents));
    h.levels.push_back(std::move(r.fine));
  }
  return h;
}

void write_mesh_ascii(const Mesh& mesh, std::ostream& out) {
  out << "cutfem-mesh 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  out.precision(17);
  for (const auto& x : mesh.vertices) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  out << "tets " << mesh.num_tets() << "\n";
  for (const auto& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

}  // namespace cutfem
