#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vns/element.hpp"
#include "vns/mesh.hpp"
#include "vns/quadrature.hpp"
#include "vns/types.hpp"

namespace vns {

/// Mesh plus face connectivity after periodic identification. Shared,
/// immutable input to every function space built on it.
struct Topology {
  Mesh mesh;
  FaceSet raw_faces;
  PeriodicMap periodic;
  FaceSet faces;  // effective faces (periodic pairs merged)
  std::vector<ElementMap> maps;

  std::size_t num_elements() const { return mesh.num_triangles(); }
};

std::shared_ptr<const Topology> make_topology(Mesh mesh, bool periodic_x, bool periodic_y);

enum class SpaceFamily {
  THVelocity,  // continuous vector Lagrange
  THPressure,  // continuous scalar Lagrange
  DCPressure,  // discontinuous scalar Lagrange
  BDM,
  RT,
};

const char* space_family_name(SpaceFamily f);

enum class Continuity { Continuous, NormalContinuous, Discontinuous };

struct SpaceOptions {
  /// Strong zero boundary values on non-periodic boundaries: all components
  /// for THVelocity, the normal component for BDM/RT (H0(div)).
  bool zero_boundary = false;
};

/// Global finite element space. `degree` is the polynomial degree of the
/// element itself (P_degree, BDM_degree, RT_degree).
///
/// Element-local basis evaluation returns the restriction of the global
/// basis functions, with orientation signs already applied. Local dofs that
/// are eliminated by boundary constraints map to global index -1.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Topology> topology, SpaceFamily family, int degree,
                SpaceOptions options = {});

  SpaceFamily family() const { return family_; }
  int degree() const { return degree_; }
  bool is_vector() const { return family_ == SpaceFamily::THVelocity || is_hdiv(); }
  bool is_hdiv() const { return family_ == SpaceFamily::BDM || family_ == SpaceFamily::RT; }
  Continuity continuity() const;
  const SpaceOptions& options() const { return options_; }

  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& topology_ptr() const { return topology_; }
  const ReferenceBasis& basis() const { return basis_; }

  int local_dim() const { return local_dim_; }
  int num_dofs() const { return num_dofs_; }
  std::span<const int> element_dofs(std::size_t element) const {
    return {dofs_.data() + element * local_dim_, static_cast<std::size_t>(local_dim_)};
  }
  std::span<const double> element_signs(std::size_t element) const {
    return {signs_.data() + element * local_dim_, static_cast<std::size_t>(local_dim_)};
  }

  /// Polynomial degree of the local functions (used to pick quadrature).
  int poly_degree() const { return basis_.poly_degree(); }

  void eval_vector(std::size_t element, const Vec2& xhat, std::span<Vec2> values,
                   std::span<Mat2> grads, std::span<double> divs) const;
  void eval_scalar(std::size_t element, const Vec2& xhat, std::span<double> values,
                   std::span<Vec2> grads) const;

  std::string describe() const;

 private:
  void number_lagrange();
  void number_hdiv();

  std::shared_ptr<const Topology> topology_;
  SpaceFamily family_;
  int degree_;
  SpaceOptions options_;
  ReferenceBasis basis_;
  int local_dim_ = 0;
  int num_dofs_ = 0;
  std::vector<int> dofs_;
  std::vector<double> signs_;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

SpacePtr build_function_space(std::shared_ptr<const Topology> topology, SpaceFamily family,
                              int degree, SpaceOptions options = {});

/// Coefficient vector over a function space (u_h, p_h, w_h, beta_h, ...).
struct DiscreteField {
  SpacePtr space;
  Vector coeffs;

  DiscreteField() = default;
  explicit DiscreteField(SpacePtr s) : space(std::move(s)), coeffs(Vector::Zero(space->num_dofs())) {}
  DiscreteField(SpacePtr s, Vector c);

  /// Vector value (and gradient) at a reference point of an element.
  Vec2 vector_value(std::size_t element, const Vec2& xhat, Mat2* grad = nullptr,
                    double* div = nullptr) const;
  double scalar_value(std::size_t element, const Vec2& xhat, Vec2* grad = nullptr) const;
};

using VectorFunction = std::function<Vec2(const Vec2&)>;
using ScalarFunction = std::function<double(const Vec2&)>;

/// Nodal interpolant (Lagrange) or canonical moment interpolant (BDM/RT).
DiscreteField interpolate_field(SpacePtr space, const VectorFunction& f);
DiscreteField interpolate_field(SpacePtr space, const ScalarFunction& f);

/// Element containing x and its reference coordinates.
struct PointLocation {
  std::size_t element;
  Vec2 xhat;
};
PointLocation locate_point(const Topology& topology, const Vec2& x);

Vec2 evaluate_vector_field(const DiscreteField& field, const Vec2& x);
double evaluate_scalar_field(const DiscreteField& field, const Vec2& x);

/// Basis values at the points of a volume rule, tabulated once on the
/// reference element and mapped per element.
struct VectorTable {
  int nq = 0, nb = 0;
  std::vector<Vec2> val;   // [q * nb + i]
  std::vector<Mat2> grad;
  std::vector<double> div;
  std::vector<double> jxw;  // weight * |det J|
  std::vector<Vec2> x;      // physical points

  const Vec2& v(int q, int i) const { return val[q * nb + i]; }
  const Mat2& g(int q, int i) const { return grad[q * nb + i]; }
  double d(int q, int i) const { return div[q * nb + i]; }
};

struct ScalarTable {
  int nq = 0, nb = 0;
  std::vector<double> val;
  std::vector<Vec2> grad;
  std::vector<double> jxw;
  std::vector<Vec2> x;

  double v(int q, int i) const { return val[q * nb + i]; }
};

class VolumeTabulator {
 public:
  VolumeTabulator(const FunctionSpace& space, QuadratureRule rule);

  void tabulate(std::size_t element, VectorTable& out) const;
  void tabulate(std::size_t element, ScalarTable& out) const;
  const QuadratureRule& rule() const { return rule_; }

 private:
  const FunctionSpace& space_;
  QuadratureRule rule_;
  std::vector<Vec2> ref_val_;
  std::vector<Mat2> ref_grad_;
  std::vector<double> ref_sval_;
  std::vector<Vec2> ref_sgrad_;
};

/// Reference coordinates of the point at parameter t along a face side.
inline Vec2 face_point(const FaceSide& side, double t) {
  return reference_vertex(side.local_a) * (1.0 - t) + reference_vertex(side.local_b) * t;
}

}  // namespace vns
