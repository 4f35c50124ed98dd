#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdgl {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Local entity numbering. Edges and faces are listed with ascending local
// vertex indices; globally an edge is stored lo<hi and a face as a sorted
// triple, so entity orientation never depends on cell input order.
inline constexpr int tri_edge_verts[3][2] = {{0, 1}, {0, 2}, {1, 2}};
inline constexpr int tet_edge_verts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
inline constexpr int tet_face_verts[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};

// Simplicial mesh of triangles (dim 2, z = 0) or tetrahedra (dim 3).
// Cells are stored positively oriented; finalize() builds the derived
// connectivity and must be called after any direct construction.
struct Mesh {
  int dim = 2;
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 4>> cells;   // [dim] entry unused (-1) in 2D
  std::vector<uint8_t> cell_reordered;     // input orientation was flipped

  std::vector<std::array<int, 2>> edges;   // global vertex ids, lo < hi
  std::vector<std::array<int, 3>> faces;   // 3D only, sorted triples
  std::vector<std::array<int, 6>> cell_edges;
  std::vector<std::array<int8_t, 6>> cell_edge_signs;  // 2D: +1 iff global edge normal points outward
  std::vector<std::array<int, 4>> cell_faces;          // 3D
  std::vector<std::array<int8_t, 4>> cell_face_signs;  // +1 iff global face normal points outward
  std::vector<uint8_t> vertex_on_boundary;
  std::vector<uint8_t> edge_on_boundary;
  std::vector<uint8_t> face_on_boundary;
  std::vector<int> edge_tag;  // boundary tag, 0 if interior/untagged
  std::vector<int> face_tag;

  enum class Kind { Generic, StructuredSquare, StructuredCube };
  Kind kind = Kind::Generic;
  int structured_m = 0;

  int nverts() const { return static_cast<int>(vertices.size()); }
  int ncells() const { return static_cast<int>(cells.size()); }
  int nedges() const { return static_cast<int>(edges.size()); }
  int nfaces() const { return static_cast<int>(faces.size()); }

  void finalize();
  double cell_volume(int c) const;  // positive
  std::array<double, 3> cell_centroid(int c) const;
  double total_volume() const;
  double min_angle_deg() const;  // over all cells; 2D triangles only
  double max_edge_length() const;
  uint64_t content_hash() const;
};

Mesh generate_unit_square_mesh(int M);  // 2M^2 triangles, fixed lo->hi diagonal
Mesh generate_unit_cube_mesh(int M);    // 6M^3 tets, Kuhn subdivision

struct NotchedDiskParams {
  double radius = 5.0;
  double notch_depth = 1.0;             // apex sits at (radius - depth, 0)
  double notch_half_angle = 0.39269908169872414;  // pi/8
  double target_h = 0.1;
};
Mesh generate_notched_disk_mesh(const NotchedDiskParams& p);
double notched_disk_area(const NotchedDiskParams& p);         // closed form
std::array<double, 3> notched_disk_corner(const NotchedDiskParams& p);

// Gmsh MSH 2.2 ASCII. Supported element types: 1 (line), 2 (triangle),
// 4 (tet); anything else is a parse error naming the type and line.
Mesh read_msh(const std::string& path);
Mesh read_msh_string(const std::string& text);
void write_msh(const Mesh& m, const std::string& path);

// Containing cell of a point for the generated structured meshes. Used for
// nested-mesh transfer; callers pass strictly interior points (centroids).
int locate_structured_cell(const Mesh& m, const std::array<double, 3>& p);

}  // namespace tdgl
