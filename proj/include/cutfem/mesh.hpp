#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutfem {

using Vec3 = std::array<double, 3>;
using Lattice3 = std::array<std::int64_t, 3>;
using Tet = std::array<int, 4>;

/// Thrown when a mesh, index set or assembled object violates a structural invariant.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Box {
  Vec3 lo{};
  Vec3 hi{};

  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const { return extent(0) * extent(1) * extent(2); }
};

struct Facet {
  std::array<int, 3> vertices{};  // ascending vertex ids
  std::array<int, 2> tets{-1, -1};  // tets[0] < tets[1]; tets[1] == -1 on the boundary
  Vec3 normal{};  // unit, pointing from tets[0] into tets[1] (outward for boundary facets)

  bool is_boundary() const { return tets[1] < 0; }
};

/// Conforming tetrahedral mesh of an axis-aligned box on a uniform lattice.
///
/// Vertices carry integer lattice coordinates at the mesh resolution so that
/// refinement hierarchies are exactly nested.  Tets are stored positively
/// oriented.
struct Mesh {
  Box box;
  int cells_per_axis = 0;  // lattice resolution of this level
  int level = 0;
  std::vector<Vec3> vertices;
  std::vector<Lattice3> lattice;
  std::vector<Tet> tets;
  std::vector<Facet> facets;
  std::vector<char> boundary_vertex;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }

  /// Edge length of the lattice cubes, i.e. the nominal mesh size h.
  double cube_edge() const { return box.extent(0) / cells_per_axis; }
  double tet_volume(int t) const;
  double signed_volume(int t) const;
  /// Longest edge of tet t.
  double tet_diameter(int t) const;
};

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Kuhn (Freudenthal) subdivision of n^3 cubes into 6 tets each, using the
/// cube diagonal (0,0,0)->(1,1,1).  Facets are built.
Mesh build_initial_mesh(int n_per_axis, const Box& box);

/// Builds facet connectivity in place.  Throws StructuralError for facets
/// shared by more than two tets or interior-looking facets with one neighbour.
void build_facets(Mesh& mesh);

/// Result of one uniform (red) refinement step.
struct Refinement {
  Mesh fine;
  std::vector<std::array<int, 8>> children;  // coarse tet -> fine tets
  /// Per fine vertex: the coarse vertex it coincides with (a == b), or the
  /// endpoints of the coarse edge whose midpoint it is.
  std::vector<std::array<int, 2>> vertex_parents;
};

/// Splits every tet into 4 corner tets and 4 tets of the inner octahedron,
/// cut along its shortest diagonal.  Coarse vertex ids are preserved.
Refinement refine_uniform(const Mesh& mesh);

struct MeshHierarchy {
  std::vector<Mesh> levels;
  std::vector<std::vector<std::array<int, 8>>> child_maps;  // child_maps[l]: level l -> l+1
  std::vector<std::vector<std::array<int, 2>>> vertex_parents;  // vertex_parents[l]: vertices of level l+1

  int finest() const { return static_cast<int>(levels.size()) - 1; }
};

MeshHierarchy build_hierarchy(int n_per_axis, const Box& box, int max_level);

/// ASCII dump: a header line, vertex block and tet block (see README).
void write_mesh_ascii(const Mesh& mesh, std::ostream& out);

}  // namespace cutfem
