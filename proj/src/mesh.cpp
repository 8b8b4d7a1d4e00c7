#include "vns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "vns/errors.hpp"

namespace vns {

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec2 e1 = vertices[tri[1]] - vertices[tri[0]];
  const Vec2 e2 = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& tri : triangles)
    for (int i = 0; i < 3; ++i)
      h = std::max(h, (vertices[tri[(i + 1) % 3]] - vertices[tri[i]]).norm());
  return h;
}

Vec2 Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

Mesh build_structured_triangle_mesh(int nx, int ny, const Rectangle& rect) {
  if (nx < 1 || ny < 1)
    throw InvalidArgument("cell counts must be positive, got nx=" + std::to_string(nx) +
                          " ny=" + std::to_string(ny));
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0))
    throw InvalidArgument("degenerate rectangle");

  Mesh mesh;
  mesh.domain = rect;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  // Interpolate from both ends so the far boundary is hit exactly.
  for (int j = 0; j <= ny; ++j) {
    const double sy = static_cast<double>(j) / ny;
    const double y = j == ny ? rect.y_max : rect.y_min * (1.0 - sy) + rect.y_max * sy;
    for (int i = 0; i <= nx; ++i) {
      const double sx = static_cast<double>(i) / nx;
      const double x = i == nx ? rect.x_max : rect.x_min * (1.0 - sx) + rect.x_max * sx;
      mesh.vertices.emplace_back(x, y);
    }
  }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.flags(flags);
  out.precision(prec);
}

namespace {

Vec2 outward_normal(const Mesh& mesh, int element, int va, int vb) {
  const Vec2 a = mesh.vertices[va];
  const Vec2 b = mesh.vertices[vb];
  const Vec2 t = (b - a).normalized();
  Vec2 n(t.y(), -t.x());
  const Vec2 mid = 0.5 * (a + b);
  if (n.dot(mid - mesh.centroid(element)) < 0.0) n = -n;
  return n;
}

int local_index(const std::array<int, 3>& tri, int v) {
  for (int i = 0; i < 3; ++i)
    if (tri[i] == v) return i;
  return -1;
}

}  // namespace

FaceSet build_face_connectivity(const Mesh& mesh) {
  // Sorted vertex pair -> (element, local edge) occurrences, in element order.
  std::map<std::pair<int, int>, std::vector<int>> edge_owners;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      int a = tri[(e + 1) % 3], b = tri[(e + 2) % 3];
      if (a > b) std::swap(a, b);
      edge_owners[{a, b}].push_back(static_cast<int>(t));
    }
  }

  FaceSet fs;
  fs.element_faces.assign(mesh.num_triangles(), {-1, -1, -1});
  // Number faces by first appearance in element order for a stable layout.
  std::vector<std::pair<int, int>> ordered;
  ordered.reserve(edge_owners.size());
  {
    std::map<std::pair<int, int>, bool> seen;
    for (const auto& tri : mesh.triangles) {
      for (int e = 0; e < 3; ++e) {
        int a = tri[(e + 1) % 3], b = tri[(e + 2) % 3];
        if (a > b) std::swap(a, b);
        if (!seen[{a, b}]) {
          seen[{a, b}] = true;
          ordered.emplace_back(a, b);
        }
      }
    }
  }

  for (const auto& key : ordered) {
    const auto& owners = edge_owners.at(key);
    if (owners.size() > 2)
      throw TopologyError("edge (" + std::to_string(key.first) + ", " +
                          std::to_string(key.second) + ") has " +
                          std::to_string(owners.size()) + " adjacent triangles");
    Face f;
    f.vertices = {key.first, key.second};
    const int plus = *std::min_element(owners.begin(), owners.end());
    const auto& tp = mesh.triangles[plus];
    f.plus = {plus, local_index(tp, key.first), local_index(tp, key.second)};
    if (owners.size() == 2) {
      const int minus = *std::max_element(owners.begin(), owners.end());
      const auto& tm = mesh.triangles[minus];
      f.minus = {minus, local_index(tm, key.first), local_index(tm, key.second)};
    }
    f.length = (mesh.vertices[key.second] - mesh.vertices[key.first]).norm();
    f.normal = outward_normal(mesh, plus, key.first, key.second);

    const int id = static_cast<int>(fs.faces.size());
    fs.element_faces[f.plus.element][f.plus.local_edge()] = id;
    if (!f.is_boundary()) fs.element_faces[f.minus.element][f.minus.local_edge()] = id;
    (f.is_boundary() ? fs.boundary_ids : fs.interior_ids).push_back(id);
    fs.faces.push_back(f);
  }
  return fs;
}

namespace {

enum class Side { Left, Right, Bottom, Top, None };

Side boundary_side(const Mesh& mesh, const Face& f, double tol) {
  const Vec2 a = mesh.vertices[f.vertices[0]];
  const Vec2 b = mesh.vertices[f.vertices[1]];
  const auto& d = mesh.domain;
  if (std::abs(a.x() - d.x_min) < tol && std::abs(b.x() - d.x_min) < tol) return Side::Left;
  if (std::abs(a.x() - d.x_max) < tol && std::abs(b.x() - d.x_max) < tol) return Side::Right;
  if (std::abs(a.y() - d.y_min) < tol && std::abs(b.y() - d.y_min) < tol) return Side::Bottom;
  if (std::abs(a.y() - d.y_max) < tol && std::abs(b.y() - d.y_max) < tol) return Side::Top;
  return Side::None;
}

bool same_point(const Vec2& p, const Vec2& q, double tol) { return (p - q).norm() < tol; }

}  // namespace

PeriodicMap apply_periodic_identification(const Mesh& mesh, const FaceSet& faces,
                                          bool periodic_x, bool periodic_y) {
  PeriodicMap pm;
  pm.periodic_x = periodic_x;
  pm.periodic_y = periodic_y;
  pm.partner.assign(faces.size(), -1);
  pm.vertex_map.resize(mesh.num_vertices());
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) pm.vertex_map[v] = static_cast<int>(v);
  if (!periodic_x && !periodic_y) return pm;

  const double scale = std::max(mesh.domain.width(), mesh.domain.height());
  const double tol = 1e-10 * scale;

  const auto match = [&](Side lo, Side hi, const Vec2& shift, const char* axis) {
    std::vector<int> lows, highs;
    for (int id : faces.boundary_ids) {
      const Side s = boundary_side(mesh, faces.faces[id], tol);
      if (s == lo) lows.push_back(id);
      if (s == hi) highs.push_back(id);
    }
    if (lows.size() != highs.size())
      throw PeriodicityError(std::string("opposite boundaries in ") + axis +
                             " have different face counts");
    for (int lo_id : lows) {
      const Face& fl = faces.faces[lo_id];
      const Vec2 a = mesh.vertices[fl.vertices[0]] + shift;
      const Vec2 b = mesh.vertices[fl.vertices[1]] + shift;
      int found = -1;
      for (int hi_id : highs) {
        const Face& fh = faces.faces[hi_id];
        const Vec2 c = mesh.vertices[fh.vertices[0]];
        const Vec2 d = mesh.vertices[fh.vertices[1]];
        if ((same_point(a, c, tol) && same_point(b, d, tol)) ||
            (same_point(a, d, tol) && same_point(b, c, tol))) {
          found = hi_id;
          break;
        }
      }
      if (found < 0)
        throw PeriodicityError(std::string("boundary face ") + std::to_string(lo_id) +
                               " has no translated partner in " + axis);
      if (std::abs(fl.length - faces.faces[found].length) > 1e-12 * scale)
        throw PeriodicityError("matched faces differ in length");
      pm.face_pairs.emplace_back(lo_id, found);
      pm.partner[lo_id] = found;
      pm.partner[found] = lo_id;
    }
    // Vertices on the high side map to their translated low-side partner.
    std::vector<int> low_vertices, high_vertices;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      const Vec2& p = mesh.vertices[v];
      const bool on_lo = lo == Side::Left ? std::abs(p.x() - mesh.domain.x_min) < tol
                                          : std::abs(p.y() - mesh.domain.y_min) < tol;
      const bool on_hi = lo == Side::Left ? std::abs(p.x() - mesh.domain.x_max) < tol
                                          : std::abs(p.y() - mesh.domain.y_max) < tol;
      if (on_lo) low_vertices.push_back(static_cast<int>(v));
      if (on_hi) high_vertices.push_back(static_cast<int>(v));
    }
    for (int hv : high_vertices) {
      int found = -1;
      for (int lv : low_vertices)
        if (same_point(mesh.vertices[lv] + shift, mesh.vertices[hv], tol)) found = lv;
      if (found < 0) throw PeriodicityError("boundary vertex without translated partner");
      pm.vertex_map[hv] = found;
    }
  };

  if (periodic_x) match(Side::Left, Side::Right, Vec2(mesh.domain.width(), 0.0), "x");
  if (periodic_y) match(Side::Bottom, Side::Top, Vec2(0.0, mesh.domain.height()), "y");
  // Corners are identified twice; resolve chains to a fixed point.
  for (auto& m : pm.vertex_map)
    while (pm.vertex_map[m] != m) m = pm.vertex_map[m];
  return pm;
}

FaceSet merge_periodic_faces(const Mesh& mesh, const FaceSet& faces,
                             const PeriodicMap& periodic) {
  if (periodic.empty()) return faces;
  FaceSet out;
  out.element_faces.assign(mesh.num_triangles(), {-1, -1, -1});
  const double tol = 1e-10 * std::max(mesh.domain.width(), mesh.domain.height());

  for (std::size_t id = 0; id < faces.size(); ++id) {
    const Face& f = faces.faces[id];
    const int partner = periodic.partner.empty() ? -1 : periodic.partner[id];
    Face merged = f;
    if (partner >= 0) {
      if (partner < static_cast<int>(id)) continue;  // emitted with its partner
      const Face& g = faces.faces[partner];
      const Face& p = f.plus.element <= g.plus.element ? f : g;
      const Face& m = f.plus.element <= g.plus.element ? g : f;
      merged = p;
      merged.periodic = true;
      // Shift that carries minus-side coordinates onto the plus-side face.
      const Vec2 pa = mesh.vertices[p.vertices[0]];
      const Vec2 ma = mesh.vertices[m.vertices[0]];
      const Vec2 mb = mesh.vertices[m.vertices[1]];
      const Vec2 pb = mesh.vertices[p.vertices[1]];
      Vec2 shift;
      int m_va, m_vb;
      if ((mb - ma).dot(pb - pa) > 0.0) {
        shift = pa - ma;
        m_va = m.vertices[0];
        m_vb = m.vertices[1];
      } else {
        shift = pa - mb;
        m_va = m.vertices[1];
        m_vb = m.vertices[0];
      }
      if (!((mesh.vertices[m_vb] + shift - pb).norm() < tol))
        throw PeriodicityError("matched faces are not translates of each other");
      const auto& tm = mesh.triangles[m.plus.element];
      merged.minus = {m.plus.element, local_index(tm, m_va), local_index(tm, m_vb)};
      merged.minus_shift = shift;
    }
    const int new_id = static_cast<int>(out.faces.size());
    out.element_faces[merged.plus.element][merged.plus.local_edge()] = new_id;
    if (!merged.is_boundary())
      out.element_faces[merged.minus.element][merged.minus.local_edge()] = new_id;
    (merged.is_boundary() ? out.boundary_ids : out.interior_ids).push_back(new_id);
    out.faces.push_back(merged);
  }
  return out;
}

}  // namespace vns
