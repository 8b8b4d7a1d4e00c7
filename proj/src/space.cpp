#include "vns/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vns/errors.hpp"

namespace vns {

std::shared_ptr<const Topology> make_topology(Mesh mesh, bool periodic_x, bool periodic_y) {
  auto topo = std::make_shared<Topology>();
  topo->mesh = std::move(mesh);
  topo->raw_faces = build_face_connectivity(topo->mesh);
  topo->periodic = apply_periodic_identification(topo->mesh, topo->raw_faces, periodic_x, periodic_y);
  topo->faces = merge_periodic_faces(topo->mesh, topo->raw_faces, topo->periodic);
  topo->maps.reserve(topo->mesh.num_triangles());
  for (const auto& tri : topo->mesh.triangles)
    topo->maps.emplace_back(topo->mesh.vertices[tri[0]], topo->mesh.vertices[tri[1]],
                            topo->mesh.vertices[tri[2]]);
  return topo;
}

const char* space_family_name(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::THVelocity: return "TH-velocity";
    case SpaceFamily::THPressure: return "TH-pressure";
    case SpaceFamily::DCPressure: return "DC-pressure";
    case SpaceFamily::BDM: return "BDM";
    case SpaceFamily::RT: return "RT";
  }
  return "?";
}

namespace {

Family element_family(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::BDM: return Family::BDM;
    case SpaceFamily::RT: return Family::RT;
    default: return Family::Lagrange;
  }
}

void check_supported(SpaceFamily family, int degree) {
  const bool continuous = family == SpaceFamily::THVelocity || family == SpaceFamily::THPressure;
  if (continuous && degree < 1)
    throw CapabilityError(std::string(space_family_name(family)) + " needs degree >= 1");
}

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const Topology> topology, SpaceFamily family,
                             int degree, SpaceOptions options)
    : topology_(std::move(topology)),
      family_(family),
      degree_(degree),
      options_(options),
      basis_((check_supported(family, degree), element_family(family)), degree) {
  if (is_hdiv())
    number_hdiv();
  else
    number_lagrange();
}

Continuity FunctionSpace::continuity() const {
  switch (family_) {
    case SpaceFamily::THVelocity:
    case SpaceFamily::THPressure: return Continuity::Continuous;
    case SpaceFamily::BDM:
    case SpaceFamily::RT: return Continuity::NormalContinuous;
    default: return Continuity::Discontinuous;
  }
}

std::string FunctionSpace::describe() const {
  std::ostringstream os;
  os << space_family_name(family_) << "(" << degree_ << "), " << num_dofs_ << " dofs";
  return os.str();
}

void FunctionSpace::number_lagrange() {
  const auto& topo = *topology_;
  const std::size_t ne = topo.num_elements();
  const int ns = basis_.dim();
  const int components = family_ == SpaceFamily::THVelocity ? 2 : 1;
  local_dim_ = ns * components;
  dofs_.assign(ne * local_dim_, -1);
  signs_.assign(ne * local_dim_, 1.0);

  std::vector<int> scalar(ne * ns, -1);
  int next = 0;
  if (family_ == SpaceFamily::DCPressure) {
    for (std::size_t i = 0; i < scalar.size(); ++i) scalar[i] = next++;
  } else {
    const int p = degree_;
    const bool constrain = options_.zero_boundary && family_ == SpaceFamily::THVelocity;
    std::vector<char> boundary_vertex(topo.mesh.num_vertices(), 0);
    for (int id : topo.faces.boundary_ids)
      for (int v : topo.faces.faces[id].vertices) boundary_vertex[topo.periodic.vertex_map[v]] = 1;

    std::vector<int> vertex_dof(topo.mesh.num_vertices(), -2);  // -2: unassigned
    std::vector<int> edge_dof(topo.faces.size() * std::max(0, p - 1), -2);
    for (std::size_t k = 0; k < ne; ++k) {
      const auto& tri = topo.mesh.triangles[k];
      int* loc = scalar.data() + k * ns;
      for (int i = 0; i < 3; ++i) {
        const int v = topo.periodic.vertex_map[tri[i]];
        if (vertex_dof[v] == -2) vertex_dof[v] = (constrain && boundary_vertex[v]) ? -1 : next++;
        loc[i] = vertex_dof[v];
      }
      for (int e = 0; e < 3; ++e) {
        const int fid = topo.faces.element_faces[k][e];
        const Face& f = topo.faces.faces[fid];
        const FaceSide& side = f.plus.element == static_cast<int>(k) && f.plus.local_edge() == e
                                   ? f.plus
                                   : f.minus;
        for (int i = 0; i < p - 1; ++i) {
          const int along = side.aligned() ? i : p - 2 - i;
          int& g = edge_dof[static_cast<std::size_t>(fid) * (p - 1) + along];
          if (g == -2) g = (constrain && f.is_boundary()) ? -1 : next++;
          loc[3 + e * (p - 1) + i] = g;
        }
      }
      for (int i = 3 + 3 * (p - 1); i < ns; ++i) loc[i] = next++;
    }
  }

  for (std::size_t k = 0; k < ne; ++k)
    for (int c = 0; c < components; ++c)
      for (int i = 0; i < ns; ++i) {
        const int s = scalar[k * ns + i];
        dofs_[k * local_dim_ + c * ns + i] = s < 0 ? -1 : components * s + c;
      }
  num_dofs_ = components * next;
}

void FunctionSpace::number_hdiv() {
  const auto& topo = *topology_;
  const std::size_t ne = topo.num_elements();
  local_dim_ = basis_.dim();
  const int per_edge = basis_.dofs_per_edge();
  dofs_.assign(ne * local_dim_, -1);
  signs_.assign(ne * local_dim_, 1.0);
  std::vector<int> edge_dof(topo.faces.size() * per_edge, -2);
  int next = 0;
  for (std::size_t k = 0; k < ne; ++k) {
    int* loc = dofs_.data() + k * local_dim_;
    double* sgn = signs_.data() + k * local_dim_;
    for (int e = 0; e < 3; ++e) {
      const int fid = topo.faces.element_faces[k][e];
      const Face& f = topo.faces.faces[fid];
      const bool is_plus = f.plus.element == static_cast<int>(k) && f.plus.local_edge() == e;
      const FaceSide& side = is_plus ? f.plus : f.minus;
      const double side_sign = is_plus ? 1.0 : -1.0;
      for (int j = 0; j < per_edge; ++j) {
        int& g = edge_dof[static_cast<std::size_t>(fid) * per_edge + j];
        if (g == -2) g = (options_.zero_boundary && f.is_boundary()) ? -1 : next++;
        loc[e * per_edge + j] = g;
        sgn[e * per_edge + j] = side_sign * ((side.aligned() || j % 2 == 0) ? 1.0 : -1.0);
      }
    }
    for (int i = 3 * per_edge; i < local_dim_; ++i) loc[i] = next++;
  }
  num_dofs_ = next;
}

void FunctionSpace::eval_vector(std::size_t element, const Vec2& xhat, std::span<Vec2> values,
                                std::span<Mat2> grads, std::span<double> divs) const {
  if (!is_vector()) throw ContractViolation("eval_vector on a scalar space");
  const ElementMap& map = topology_->maps[element];
  const auto signs = element_signs(element);
  if (is_hdiv()) {
    eval_hdiv_basis(basis_, map, xhat, values, divs, grads);
    for (int i = 0; i < local_dim_; ++i) {
      values[i] *= signs[i];
      if (!divs.empty()) divs[i] *= signs[i];
      if (!grads.empty()) grads[i] *= signs[i];
    }
    return;
  }
  const int ns = basis_.dim();
  double sv[15];
  Vec2 sg[15];
  eval_scalar_basis(basis_, map, xhat, std::span<double>(sv, ns), std::span<Vec2>(sg, ns));
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < ns; ++i) {
      const int l = c * ns + i;
      values[l] = c == 0 ? Vec2(sv[i], 0.0) : Vec2(0.0, sv[i]);
      if (!grads.empty()) {
        grads[l].setZero();
        grads[l].row(c) = sg[i].transpose();
      }
      if (!divs.empty()) divs[l] = sg[i](c);
    }
}

void FunctionSpace::eval_scalar(std::size_t element, const Vec2& xhat, std::span<double> values,
                                std::span<Vec2> grads) const {
  if (is_vector()) throw ContractViolation("eval_scalar on a vector space");
  eval_scalar_basis(basis_, topology_->maps[element], xhat, values, grads);
}

SpacePtr build_function_space(std::shared_ptr<const Topology> topology, SpaceFamily family,
                              int degree, SpaceOptions options) {
  return std::make_shared<const FunctionSpace>(std::move(topology), family, degree, options);
}

DiscreteField::DiscreteField(SpacePtr s, Vector c) : space(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != space->num_dofs())
    throw InvalidArgument("coefficient length " + std::to_string(coeffs.size()) +
                          " does not match space dof count " +
                          std::to_string(space->num_dofs()));
}

Vec2 DiscreteField::vector_value(std::size_t element, const Vec2& xhat, Mat2* grad,
                                 double* div) const {
  const int n = space->local_dim();
  Vec2 vals[60];
  Mat2 grads[60];
  double divs[60];
  space->eval_vector(element, xhat, std::span<Vec2>(vals, n), std::span<Mat2>(grads, n),
                     std::span<double>(divs, n));
  const auto dofs = space->element_dofs(element);
  Vec2 v(0.0, 0.0);
  Mat2 g = Mat2::Zero();
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    if (dofs[i] < 0) continue;
    const double c = coeffs(dofs[i]);
    v += c * vals[i];
    g += c * grads[i];
    d += c * divs[i];
  }
  if (grad) *grad = g;
  if (div) *div = d;
  return v;
}

double DiscreteField::scalar_value(std::size_t element, const Vec2& xhat, Vec2* grad) const {
  const int n = space->local_dim();
  double vals[15];
  Vec2 grads[15];
  space->eval_scalar(element, xhat, std::span<double>(vals, n), std::span<Vec2>(grads, n));
  const auto dofs = space->element_dofs(element);
  double v = 0.0;
  Vec2 g(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    if (dofs[i] < 0) continue;
    v += coeffs(dofs[i]) * vals[i];
    g += coeffs(dofs[i]) * grads[i];
  }
  if (grad) *grad = g;
  return v;
}

DiscreteField interpolate_field(SpacePtr space, const VectorFunction& f) {
  if (!space->is_vector()) throw ContractViolation("vector interpolation into a scalar space");
  DiscreteField out(space);
  const auto& topo = space->topology();
  std::vector<char> written(space->num_dofs(), 0);
  for (std::size_t k = 0; k < topo.num_elements(); ++k) {
    const ElementMap& map = topo.maps[k];
    const auto dofs = space->element_dofs(k);
    const auto signs = space->element_signs(k);
    if (space->is_hdiv()) {
      // Contravariant pullback: fhat = det J * J^-1 f(x).
      const Mat2 jinv = map.jacobian_inverse();
      const double det = map.det();
      const auto pulled = [&](const Vec2& xh) -> Vec2 { return det * (jinv * f(map.to_physical(xh))); };
      const Eigen::VectorXd local =
          space->basis().apply_functionals(pulled, 3 * space->poly_degree() + 6);
      for (int i = 0; i < space->local_dim(); ++i) {
        if (dofs[i] < 0 || written[dofs[i]]) continue;
        out.coeffs(dofs[i]) = signs[i] * local(i);
        written[dofs[i]] = 1;
      }
    } else {
      const auto& nodes = space->basis().nodes();
      const int ns = static_cast<int>(nodes.size());
      for (int i = 0; i < ns; ++i) {
        const Vec2 val = f(map.to_physical(nodes[i]));
        for (int c = 0; c < 2; ++c) {
          const int g = dofs[c * ns + i];
          if (g < 0 || written[g]) continue;
          out.coeffs(g) = val(c);
          written[g] = 1;
        }
      }
    }
  }
  return out;
}

DiscreteField interpolate_field(SpacePtr space, const ScalarFunction& f) {
  if (space->is_vector()) throw ContractViolation("scalar interpolation into a vector space");
  DiscreteField out(space);
  const auto& topo = space->topology();
  const auto& nodes = space->basis().nodes();
  std::vector<char> written(space->num_dofs(), 0);
  for (std::size_t k = 0; k < topo.num_elements(); ++k) {
    const auto dofs = space->element_dofs(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const int g = dofs[i];
      if (g < 0 || written[g]) continue;
      out.coeffs(g) = f(topo.maps[k].to_physical(nodes[i]));
      written[g] = 1;
    }
  }
  return out;
}

namespace {

bool inside_reference(const Vec2& xh, double tol) {
  return xh.x() >= -tol && xh.y() >= -tol && xh.x() + xh.y() <= 1.0 + tol;
}

}  // namespace

PointLocation locate_point(const Topology& topo, const Vec2& x) {
  constexpr double tol = 1e-12;
  const Mesh& mesh = topo.mesh;
  if (mesh.nx > 0 && mesh.ny > 0) {
    const auto& d = mesh.domain;
    const int i = std::clamp(static_cast<int>(std::floor((x.x() - d.x_min) / d.width() * mesh.nx)),
                             0, mesh.nx - 1);
    const int j = std::clamp(static_cast<int>(std::floor((x.y() - d.y_min) / d.height() * mesh.ny)),
                             0, mesh.ny - 1);
    for (int s = 0; s < 2; ++s) {
      const std::size_t k = 2 * (static_cast<std::size_t>(j) * mesh.nx + i) + s;
      const Vec2 xh = topo.maps[k].to_reference(x);
      if (inside_reference(xh, tol)) return {k, xh};
    }
  }
  for (std::size_t k = 0; k < topo.num_elements(); ++k) {
    const Vec2 xh = topo.maps[k].to_reference(x);
    if (inside_reference(xh, tol)) return {k, xh};
  }
  std::ostringstream os;
  os << "point (" << x.x() << ", " << x.y() << ") lies outside the mesh";
  throw GeometryError(os.str());
}

Vec2 evaluate_vector_field(const DiscreteField& field, const Vec2& x) {
  const auto loc = locate_point(field.space->topology(), x);
  return field.vector_value(loc.element, loc.xhat);
}

double evaluate_scalar_field(const DiscreteField& field, const Vec2& x) {
  const auto loc = locate_point(field.space->topology(), x);
  return field.scalar_value(loc.element, loc.xhat);
}

VolumeTabulator::VolumeTabulator(const FunctionSpace& space, QuadratureRule rule)
    : space_(space), rule_(std::move(rule)) {
  const auto& basis = space.basis();
  const int nq = static_cast<int>(rule_.size());
  const int nb = basis.dim();
  if (basis.is_vector()) {
    ref_val_.resize(nq * nb);
    ref_grad_.resize(nq * nb);
    for (int q = 0; q < nq; ++q)
      basis.eval_vector(rule_.points[q], std::span<Vec2>(ref_val_.data() + q * nb, nb),
                        std::span<Mat2>(ref_grad_.data() + q * nb, nb));
  } else {
    ref_sval_.resize(nq * nb);
    ref_sgrad_.resize(nq * nb);
    for (int q = 0; q < nq; ++q)
      basis.eval_scalar(rule_.points[q], std::span<double>(ref_sval_.data() + q * nb, nb),
                        std::span<Vec2>(ref_sgrad_.data() + q * nb, nb));
  }
}

void VolumeTabulator::tabulate(std::size_t element, VectorTable& out) const {
  if (!space_.is_vector()) throw ContractViolation("vector tabulation of a scalar space");
  const ElementMap& map = space_.topology().maps[element];
  const int nq = static_cast<int>(rule_.size());
  const int nl = space_.local_dim();
  out.nq = nq;
  out.nb = nl;
  out.val.resize(nq * nl);
  out.grad.resize(nq * nl);
  out.div.resize(nq * nl);
  out.jxw.resize(nq);
  out.x.resize(nq);
  const double det = map.det();
  for (int q = 0; q < nq; ++q) {
    out.jxw[q] = rule_.weights[q] * std::abs(det);
    out.x[q] = map.to_physical(rule_.points[q]);
  }
  const auto signs = space_.element_signs(element);
  if (space_.is_hdiv()) {
    const Mat2& jac = map.jacobian();
    const Mat2& jinv = map.jacobian_inverse();
    const double inv_det = 1.0 / det;
    for (int q = 0; q < nq; ++q)
      for (int i = 0; i < nl; ++i) {
        const double s = signs[i] * inv_det;
        const Mat2& g = ref_grad_[q * nl + i];
        out.val[q * nl + i] = s * (jac * ref_val_[q * nl + i]);
        out.grad[q * nl + i] = s * (jac * g * jinv);
        out.div[q * nl + i] = s * g.trace();
      }
    return;
  }
  const int ns = space_.basis().dim();
  const Mat2 jit = map.inverse_transpose();
  for (int q = 0; q < nq; ++q)
    for (int i = 0; i < ns; ++i) {
      const double v = ref_sval_[q * ns + i];
      const Vec2 g = jit * ref_sgrad_[q * ns + i];
      for (int c = 0; c < 2; ++c) {
        const int l = c * ns + i;
        out.val[q * nl + l] = c == 0 ? Vec2(v, 0.0) : Vec2(0.0, v);
        Mat2 gm = Mat2::Zero();
        gm.row(c) = g.transpose();
        out.grad[q * nl + l] = gm;
        out.div[q * nl + l] = g(c);
      }
    }
}

void VolumeTabulator::tabulate(std::size_t element, ScalarTable& out) const {
  if (space_.is_vector()) throw ContractViolation("scalar tabulation of a vector space");
  const ElementMap& map = space_.topology().maps[element];
  const int nq = static_cast<int>(rule_.size());
  const int nb = space_.local_dim();
  out.nq = nq;
  out.nb = nb;
  out.val.assign(ref_sval_.begin(), ref_sval_.end());
  out.grad.resize(nq * nb);
  out.jxw.resize(nq);
  out.x.resize(nq);
  const Mat2 jit = map.inverse_transpose();
  for (int q = 0; q < nq; ++q) {
    out.jxw[q] = rule_.weights[q] * std::abs(map.det());
    out.x[q] = map.to_physical(rule_.points[q]);
    for (int i = 0; i < nb; ++i) out.grad[q * nb + i] = jit * ref_sgrad_[q * nb + i];
  }
}

}  // namespace vns
