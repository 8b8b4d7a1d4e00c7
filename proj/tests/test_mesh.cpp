#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "vns/errors.hpp"

using namespace vns;

TEST_SUITE("mesh") {

TEST_CASE("single cell splits into two triangles") {
  Mesh m = build_structured_triangle_mesh(1, 1, {0, 0, 1, 1});
  CHECK(m.num_triangles() == 2);
  CHECK(m.num_vertices() == 4);
  FaceSet f = build_face_connectivity(m);
  CHECK(f.size() == 5);
  CHECK(f.interior_ids.size() == 1);
  CHECK(f.boundary_ids.size() == 4);
}

TEST_CASE("mesh size on the Taylor-Green box") {
  Mesh m = build_structured_triangle_mesh(10, 10, {0, 0, test::kTwoPi, test::kTwoPi});
  CHECK(m.max_edge_length() == doctest::Approx(std::sqrt(2.0) * test::kTwoPi / 10).epsilon(1e-14));
  CHECK(m.max_edge_length() == doctest::Approx(0.8886).epsilon(1e-4));
}

TEST_CASE("areas sum to the rectangle and orientation is positive") {
  Mesh m = build_structured_triangle_mesh(5, 5, {0, 0, 1, 1});
  double total = 0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const double shoelace = 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
    CHECK(shoelace > 0);
    CHECK(m.signed_area(t) == doctest::Approx(shoelace).epsilon(1e-14));
    total += shoelace;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("bad counts are rejected") {
  CHECK_THROWS_AS(build_structured_triangle_mesh(0, 3, {0, 0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(build_structured_triangle_mesh(3, -1, {0, 0, 1, 1}), InvalidArgument);
}

TEST_CASE("face counts match brute-force edge enumeration") {
  Mesh m = build_structured_triangle_mesh(10, 10, {0, 0, test::kTwoPi, test::kTwoPi});
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  int interior = 0;
  for (const auto& [_, n] : edges) interior += n == 2;

  FaceSet f = build_face_connectivity(m);
  CHECK(f.size() == edges.size());
  CHECK(f.size() == 320);
  CHECK(f.interior_ids.size() == static_cast<std::size_t>(interior));
  CHECK(f.interior_ids.size() == 280);
  CHECK(f.boundary_ids.size() == 40);

  std::size_t sides = 0;
  for (const auto& face : f.faces) sides += face.num_sides();
  CHECK(sides == 3 * m.num_triangles());
}

TEST_CASE("normals are unit and point from plus to minus") {
  Mesh m = build_structured_triangle_mesh(3, 2, {0, 0, 1, 1});
  FaceSet f = build_face_connectivity(m);
  for (const auto& face : f.faces) {
    CHECK(face.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const Vec2 mid = 0.5 * (m.vertices[face.vertices[0]] + m.vertices[face.vertices[1]]);
    CHECK((mid - m.centroid(face.plus.element)).dot(face.normal) > 0);
    CHECK(face.length == doctest::Approx((m.vertices[face.vertices[0]] - m.vertices[face.vertices[1]]).norm()));
  }
}

TEST_CASE("over-shared edge is a topology error") {
  Mesh m = build_structured_triangle_mesh(1, 1, {0, 0, 1, 1});
  m.triangles.push_back(m.triangles[0]);
  CHECK_THROWS_AS(build_face_connectivity(m), TopologyError);
}

TEST_CASE("periodic identification") {
  SUBCASE("2x2 pairs 8 boundary faces into 4") {
    Mesh m = build_structured_triangle_mesh(2, 2, {0, 0, 1, 1});
    FaceSet f = build_face_connectivity(m);
    PeriodicMap p = apply_periodic_identification(m, f, true, true);
    CHECK(p.face_pairs.size() == 4);
    FaceSet merged = merge_periodic_faces(m, f, p);
    CHECK(merged.boundary_ids.empty());
    CHECK(merged.size() == f.size() - 4);
  }
  SUBCASE("no flags leaves the map empty") {
    Mesh m = build_structured_triangle_mesh(2, 2, {0, 0, 1, 1});
    CHECK(apply_periodic_identification(m, build_face_connectivity(m), false, false).empty());
  }
  SUBCASE("10x10 box") {
    auto topo = test::periodic_box(10);
    CHECK(topo->periodic.face_pairs.size() == 20);
    CHECK(topo->faces.size() == 300);
    CHECK(topo->faces.interior_ids.size() == 300);
    CHECK(topo->faces.boundary_ids.empty());
  }
  SUBCASE("one direction only") {
    auto topo = make_topology(build_structured_triangle_mesh(4, 3, {0, 0, 1, 1}), true, false);
    CHECK(topo->periodic.face_pairs.size() == 3);
    CHECK(topo->faces.boundary_ids.size() == 8);
  }
}

TEST_CASE("misaligned opposite sides are rejected") {
  Mesh m = build_structured_triangle_mesh(3, 3, {0, 0, 1, 1});
  for (auto& v : m.vertices)
    if (v.x() > 1 - 1e-12 && v.y() > 0.1 && v.y() < 0.9) v.y() += 0.05;
  FaceSet f = build_face_connectivity(m);
  CHECK_THROWS_AS(apply_periodic_identification(m, f, true, false), PeriodicityError);
}

}
