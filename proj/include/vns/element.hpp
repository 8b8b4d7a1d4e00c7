#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "vns/types.hpp"

namespace vns {

enum class Family { Lagrange, BDM, RT };

const char* family_name(Family f);

/// Affine map from the reference triangle (0,0), (1,0), (0,1) onto a
/// physical triangle: x = v0 + J xhat.
class ElementMap {
 public:
  ElementMap() = default;
  ElementMap(const Vec2& v0, const Vec2& v1, const Vec2& v2);

  Vec2 to_physical(const Vec2& xhat) const { return v0_ + jac_ * xhat; }
  Vec2 to_reference(const Vec2& x) const { return jac_inv_ * (x - v0_); }

  const Mat2& jacobian() const { return jac_; }
  const Mat2& jacobian_inverse() const { return jac_inv_; }
  Mat2 inverse_transpose() const { return jac_inv_.transpose(); }
  double det() const { return det_; }
  const Vec2& vertex(int i) const { return i == 0 ? v0_ : i == 1 ? v1_ : v2_; }

 private:
  Vec2 v0_{0, 0}, v1_{1, 0}, v2_{0, 1};
  Mat2 jac_ = Mat2::Identity();
  Mat2 jac_inv_ = Mat2::Identity();
  double det_ = 1.0;
};

/// Reference basis for one element family and degree, stored as monomial
/// coefficients. Scalar bases (Lagrange) use coef_x only.
///
/// Local numbering:
///  - Lagrange: vertices, then k-1 nodes per edge (edge i runs from vertex
///    i+1 to vertex i+2, nodes ordered along that direction), then interior
///    nodes. Degree 0 is a single barycentric node.
///  - BDM/RT: k+1 normal moments per edge (shifted Legendre P_j in the edge
///    parameter, same direction convention), then interior moments.
class ReferenceBasis {
 public:
  ReferenceBasis(Family family, int degree);

  Family family() const { return family_; }
  int degree() const { return degree_; }
  int dim() const { return dim_; }
  bool is_vector() const { return family_ != Family::Lagrange; }
  /// Degree of the monomial expansion (k, or k + 1 for RT).
  int poly_degree() const { return poly_degree_; }

  int dofs_per_vertex() const;
  int dofs_per_edge() const;
  int dofs_per_interior() const;

  /// Lagrange nodes in reference coordinates (empty for vector families).
  const std::vector<Vec2>& nodes() const { return nodes_; }

  /// Degrees of freedom of a reference-frame vector field (BDM/RT): edge
  /// normal moments then interior moments, matching the local numbering.
  Eigen::VectorXd apply_functionals(const std::function<Vec2(const Vec2&)>& field,
                                    int quadrature_degree) const;
  /// Interior test fields at a reference point (grad P_{k-1} and
  /// curl(b P_{k-2}) for BDM, (P_{k-1})^2 for RT).
  std::vector<Vec2> interior_tests(const Vec2& xhat) const;

  void eval_scalar(const Vec2& xhat, std::span<double> values, std::span<Vec2> grads) const;
  /// Reference-frame values and gradients (grad(i, j) = d phi_i / d xhat_j).
  void eval_vector(const Vec2& xhat, std::span<Vec2> values, std::span<Mat2> grads) const;

  /// Monomial coefficients, rows = monomials, cols = basis functions.
  const DenseMatrix& coef_x() const { return coef_x_; }
  const DenseMatrix& coef_y() const { return coef_y_; }

 private:
  void build_lagrange();
  void build_hdiv();

  Family family_;
  int degree_;
  int poly_degree_ = 0;
  int dim_ = 0;
  std::vector<Vec2> nodes_;
  DenseMatrix coef_x_;
  DenseMatrix coef_y_;
};

/// Number of monomials of total degree <= n.
inline int monomial_count(int n) { return (n + 1) * (n + 2) / 2; }

/// Values and gradients of x^a y^b for a + b <= n, ordered by total degree
/// then decreasing a.
void eval_monomials(int n, const Vec2& x, std::span<double> values,
                    std::span<Vec2> grads);

/// Shifted Legendre polynomial P_j on [0, 1].
double shifted_legendre(int j, double t);

/// Reference edge geometry: edge i runs from vertex (i+1)%3 to (i+2)%3.
Vec2 reference_vertex(int i);
Vec2 reference_edge_normal(int edge);  // unit, outward
double reference_edge_length(int edge);

/// Lagrange basis values and physical gradients at a reference point.
void eval_scalar_basis(const ReferenceBasis& basis, const ElementMap& map, const Vec2& xhat,
                       std::span<double> values, std::span<Vec2> grads);

/// Piola-mapped H(div) basis: values (1/detJ) J phi_hat, divergence
/// (1/detJ) div_hat phi_hat, gradient (1/detJ) J grad_hat phi_hat J^-1.
void eval_hdiv_basis(const ReferenceBasis& basis, const ElementMap& map, const Vec2& xhat,
                     std::span<Vec2> values, std::span<double> divergences,
                     std::span<Mat2> grads);

}  // namespace vns
