#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "vns/types.hpp"

namespace vns {

struct Rectangle {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
};

/// Conforming triangulation of an axis-aligned rectangle. Triangles are
/// stored counter-clockwise.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  Rectangle domain;
  // Cell counts of the structured generator; zero for meshes built otherwise.
  int nx = 0;
  int ny = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double signed_area(std::size_t t) const;
  /// Largest edge length over all triangles (the h of the convergence tables).
  double max_edge_length() const;
  Vec2 centroid(std::size_t t) const;
};

/// nx * ny squares, each split along the lower-left to upper-right diagonal.
Mesh build_structured_triangle_mesh(int nx, int ny, const Rectangle& rect);

/// Plain-text dump: "v x y" lines followed by "t i j k" lines (0-based).
void write_mesh_text(const Mesh& mesh, std::ostream& out);

/// One side of a face: the element and which of its local vertices coincide
/// with the face endpoints a and b (after periodic translation, if any).
struct FaceSide {
  int element = -1;
  int local_a = -1;
  int local_b = -1;

  /// Local edge index; edge i is opposite local vertex i.
  int local_edge() const { return 3 - local_a - local_b; }
  /// True when the element's canonical edge direction (vertex i+1 -> i+2)
  /// runs from a to b.
  bool aligned() const { return local_a == (local_edge() + 1) % 3; }
};

struct Face {
  std::array<int, 2> vertices{-1, -1};  // endpoints a, b on the plus side
  FaceSide plus;
  FaceSide minus;       // element == -1 on boundary faces
  Vec2 normal{0, 0};    // unit, outward from the plus element
  double length = 0.0;  // h_F
  /// Coordinates seen from the minus element are shifted by this vector to
  /// land on the plus-side face (non-zero only for periodic faces).
  Vec2 minus_shift{0, 0};
  bool periodic = false;

  bool is_boundary() const { return minus.element < 0; }
  int num_sides() const { return is_boundary() ? 1 : 2; }
};

struct FaceSet {
  std::vector<Face> faces;
  std::vector<int> interior_ids;
  std::vector<int> boundary_ids;
  /// element -> face id of its local edges 0, 1, 2.
  std::vector<std::array<int, 3>> element_faces;

  std::size_t size() const { return faces.size(); }
};

FaceSet build_face_connectivity(const Mesh& mesh);

struct PeriodicMap {
  bool periodic_x = false;
  bool periodic_y = false;
  /// Matched boundary faces, each pair listed once as (lower/left, upper/right).
  std::vector<std::pair<int, int>> face_pairs;
  /// face id -> matched face id, or -1.
  std::vector<int> partner;
  /// vertex id -> master vertex id (identity for vertices not identified).
  std::vector<int> vertex_map;

  bool empty() const { return face_pairs.empty(); }
};

PeriodicMap apply_periodic_identification(const Mesh& mesh, const FaceSet& faces,
                                          bool periodic_x, bool periodic_y);

/// Face set in which every matched boundary pair is replaced by a single
/// interior face. All face loops in the library run over this set.
FaceSet merge_periodic_faces(const Mesh& mesh, const FaceSet& faces,
                             const PeriodicMap& periodic);

}  // namespace vns
