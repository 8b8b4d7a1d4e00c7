#include "vns/element.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vns/errors.hpp"
#include "vns/quadrature.hpp"

namespace vns {

const char* family_name(Family f) {
  switch (f) {
    case Family::Lagrange: return "Lagrange";
    case Family::BDM: return "BDM";
    case Family::RT: return "RT";
  }
  return "?";
}

ElementMap::ElementMap(const Vec2& v0, const Vec2& v1, const Vec2& v2)
    : v0_(v0), v1_(v1), v2_(v2) {
  jac_.col(0) = v1 - v0;
  jac_.col(1) = v2 - v0;
  det_ = jac_.determinant();
  const double scale = jac_.cwiseAbs().maxCoeff();
  if (!(std::abs(det_) > 1e-14 * scale * scale))
    throw GeometryError("singular element map (det J = " + std::to_string(det_) + ")");
  jac_inv_ = jac_.inverse();
}

void eval_monomials(int n, const Vec2& x, std::span<double> values, std::span<Vec2> grads) {
  // Powers up to n of each coordinate.
  double px[8], py[8];
  px[0] = py[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    px[i] = px[i - 1] * x.x();
    py[i] = py[i - 1] * x.y();
  }
  int idx = 0;
  for (int d = 0; d <= n; ++d) {
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      values[idx] = px[a] * py[b];
      if (!grads.empty()) {
        grads[idx] = Vec2(a > 0 ? a * px[a - 1] * py[b] : 0.0, b > 0 ? b * px[a] * py[b - 1] : 0.0);
      }
      ++idx;
    }
  }
}

double shifted_legendre(int j, double t) {
  const double s = 2.0 * t - 1.0;
  double p0 = 1.0, p1 = s;
  if (j == 0) return p0;
  for (int n = 1; n < j; ++n) {
    const double p2 = ((2.0 * n + 1.0) * s * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Vec2 reference_vertex(int i) {
  switch (i) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

Vec2 reference_edge_normal(int edge) {
  switch (edge) {
    case 0: return Vec2(1.0, 1.0) / std::sqrt(2.0);
    case 1: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double reference_edge_length(int edge) { return edge == 0 ? std::sqrt(2.0) : 1.0; }

ReferenceBasis::ReferenceBasis(Family family, int degree) : family_(family), degree_(degree) {
  switch (family) {
    case Family::Lagrange:
      if (degree < 0 || degree > 4)
        throw CapabilityError("Lagrange degree " + std::to_string(degree) +
                              " unsupported (0..4)");
      build_lagrange();
      break;
    case Family::BDM:
      if (degree < 1 || degree > 4)
        throw CapabilityError("BDM degree " + std::to_string(degree) + " unsupported (1..4)");
      build_hdiv();
      break;
    case Family::RT:
      if (degree < 0 || degree > 3)
        throw CapabilityError("RT degree " + std::to_string(degree) + " unsupported (0..3)");
      build_hdiv();
      break;
  }
}

int ReferenceBasis::dofs_per_vertex() const {
  return family_ == Family::Lagrange && degree_ >= 1 ? 1 : 0;
}

int ReferenceBasis::dofs_per_edge() const {
  if (family_ == Family::Lagrange) return degree_ >= 1 ? degree_ - 1 : 0;
  return degree_ + 1;
}

int ReferenceBasis::dofs_per_interior() const {
  return dim_ - 3 * dofs_per_vertex() - 3 * dofs_per_edge();
}

void ReferenceBasis::build_lagrange() {
  const int k = degree_;
  poly_degree_ = k;
  dim_ = monomial_count(k);
  if (k == 0) {
    nodes_ = {Vec2(1.0 / 3.0, 1.0 / 3.0)};
  } else {
    for (int i = 0; i < 3; ++i) nodes_.push_back(reference_vertex(i));
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = reference_vertex((e + 1) % 3);
      const Vec2 b = reference_vertex((e + 2) % 3);
      for (int i = 1; i < k; ++i) nodes_.push_back(a + (b - a) * (static_cast<double>(i) / k));
    }
    for (int j = 1; j < k; ++j)
      for (int i = 1; i + j < k; ++i)
        nodes_.emplace_back(static_cast<double>(i) / k, static_cast<double>(j) / k);
  }
  DenseMatrix vander(dim_, dim_);
  std::vector<double> mono(dim_);
  for (int i = 0; i < dim_; ++i) {
    eval_monomials(k, nodes_[i], mono, {});
    for (int j = 0; j < dim_; ++j) vander(i, j) = mono[j];
  }
  coef_x_ = vander.inverse();
  coef_y_.resize(0, 0);
}

void ReferenceBasis::build_hdiv() {
  const int k = degree_;
  const bool rt = family_ == Family::RT;
  poly_degree_ = rt ? k + 1 : k;
  const int nm = monomial_count(poly_degree_);
  const int nk = monomial_count(k);

  // Prime basis as monomial coefficient columns.
  std::vector<Eigen::VectorXd> prime_x, prime_y;
  for (int comp = 0; comp < 2; ++comp) {
    for (int m = 0; m < nk; ++m) {
      Eigen::VectorXd cx = Eigen::VectorXd::Zero(nm), cy = Eigen::VectorXd::Zero(nm);
      (comp == 0 ? cx : cy)(m) = 1.0;
      prime_x.push_back(cx);
      prime_y.push_back(cy);
    }
  }
  if (rt) {
    // x * m for homogeneous m of degree k: x^a y^b -> (x^{a+1} y^b, x^a y^{b+1}).
    const int first_k1 = monomial_count(k);
    for (int i = 0; i <= k; ++i) {
      // monomial index i within degree k is a = k - i, b = i
      Eigen::VectorXd cx = Eigen::VectorXd::Zero(nm), cy = Eigen::VectorXd::Zero(nm);
      cx(first_k1 + i) = 1.0;      // x^{k-i+1} y^i
      cy(first_k1 + i + 1) = 1.0;  // x^{k-i} y^{i+1}
      prime_x.push_back(cx);
      prime_y.push_back(cy);
    }
  }
  dim_ = static_cast<int>(prime_x.size());

  DenseMatrix func(dim_, dim_);
  std::vector<double> mono(nm);
  for (int p = 0; p < dim_; ++p) {
    const auto prime = [&](const Vec2& x) {
      eval_monomials(poly_degree_, x, mono, {});
      double vx = 0.0, vy = 0.0;
      for (int m = 0; m < nm; ++m) {
        vx += prime_x[p](m) * mono[m];
        vy += prime_y[p](m) * mono[m];
      }
      return Vec2(vx, vy);
    };
    func.col(p) = apply_functionals(prime, 2 * poly_degree_ + 2);
  }

  Eigen::FullPivLU<DenseMatrix> lu(func);
  if (!lu.isInvertible())
    throw CapabilityError(std::string(family_name(family_)) + " degree " + std::to_string(k) +
                          " functionals are not unisolvent");
  const DenseMatrix coef = lu.inverse();
  coef_x_.resize(nm, dim_);
  coef_y_.resize(nm, dim_);
  for (int p = 0; p < dim_; ++p) {
    coef_x_.col(p).setZero();
    coef_y_.col(p).setZero();
  }
  for (int i = 0; i < dim_; ++i)
    for (int p = 0; p < dim_; ++p) {
      coef_x_.col(i) += coef(p, i) * prime_x[p];
      coef_y_.col(i) += coef(p, i) * prime_y[p];
    }
}

std::vector<Vec2> ReferenceBasis::interior_tests(const Vec2& x) const {
  const int k = degree_;
  std::vector<Vec2> tests;
  if (family_ == Family::RT) {
    if (k >= 1) {
      const int n1 = monomial_count(k - 1);
      std::vector<double> v(n1);
      eval_monomials(k - 1, x, v, {});
      for (int m = 0; m < n1; ++m) tests.emplace_back(v[m], 0.0);
      for (int m = 0; m < n1; ++m) tests.emplace_back(0.0, v[m]);
    }
  } else if (family_ == Family::BDM && k >= 2) {
    const int n1 = monomial_count(k - 1);
    std::vector<double> v(n1);
    std::vector<Vec2> g(n1);
    eval_monomials(k - 1, x, v, g);
    for (int m = 1; m < n1; ++m) tests.push_back(g[m]);  // skip the constant
    const int n2 = monomial_count(k - 2);
    std::vector<double> v2(n2);
    std::vector<Vec2> g2(n2);
    eval_monomials(k - 2, x, v2, g2);
    const double lam = 1.0 - x.x() - x.y();
    const double bub = x.x() * x.y() * lam;
    const Vec2 gb(x.y() * lam - x.x() * x.y(), x.x() * lam - x.x() * x.y());
    for (int m = 0; m < n2; ++m) {
      const Vec2 grad = gb * v2[m] + bub * g2[m];
      tests.emplace_back(grad.y(), -grad.x());
    }
  }
  return tests;
}

Eigen::VectorXd ReferenceBasis::apply_functionals(const std::function<Vec2(const Vec2&)>& field,
                                                  int quadrature_degree) const {
  if (!is_vector()) throw ContractViolation("apply_functionals needs a BDM/RT basis");
  const int k = degree_;
  const int qd = std::min(quadrature_degree, kMaxQuadratureDegree);
  const QuadratureRule er = edge_rule(qd);
  const QuadratureRule tr = triangle_rule(qd);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  int row = 0;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = reference_vertex((e + 1) % 3);
    const Vec2 b = reference_vertex((e + 2) % 3);
    const Vec2 n = reference_edge_normal(e);
    const double len = reference_edge_length(e);
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double t = er.points[q].x();
      const double fn = field(a + (b - a) * t).dot(n) * er.weights[q] * len;
      for (int j = 0; j <= k; ++j) out(row + j) += fn * shifted_legendre(j, t);
    }
    row += k + 1;
  }
  const int n_interior = dim_ - row;
  if (n_interior > 0) {
    for (std::size_t q = 0; q < tr.size(); ++q) {
      const Vec2 f = field(tr.points[q]);
      const auto tests = interior_tests(tr.points[q]);
      if (static_cast<int>(tests.size()) != n_interior)
        throw CapabilityError("interior functional count mismatch");
      for (int i = 0; i < n_interior; ++i) out(row + i) += tr.weights[q] * f.dot(tests[i]);
    }
  }
  return out;
}

void ReferenceBasis::eval_scalar(const Vec2& xhat, std::span<double> values,
                                 std::span<Vec2> grads) const {
  const int nm = monomial_count(poly_degree_);
  double mono[45];
  Vec2 mgrad[45];
  eval_monomials(poly_degree_, xhat, std::span<double>(mono, nm), std::span<Vec2>(mgrad, nm));
  for (int i = 0; i < dim_; ++i) {
    double v = 0.0;
    Vec2 g(0.0, 0.0);
    for (int m = 0; m < nm; ++m) {
      const double c = coef_x_(m, i);
      v += c * mono[m];
      g += c * mgrad[m];
    }
    values[i] = v;
    if (!grads.empty()) grads[i] = g;
  }
}

void ReferenceBasis::eval_vector(const Vec2& xhat, std::span<Vec2> values,
                                 std::span<Mat2> grads) const {
  const int nm = monomial_count(poly_degree_);
  double mono[45];
  Vec2 mgrad[45];
  eval_monomials(poly_degree_, xhat, std::span<double>(mono, nm), std::span<Vec2>(mgrad, nm));
  for (int i = 0; i < dim_; ++i) {
    double vx = 0.0, vy = 0.0;
    Vec2 gx(0.0, 0.0), gy(0.0, 0.0);
    for (int m = 0; m < nm; ++m) {
      const double cx = coef_x_(m, i), cy = coef_y_(m, i);
      vx += cx * mono[m];
      vy += cy * mono[m];
      gx += cx * mgrad[m];
      gy += cy * mgrad[m];
    }
    values[i] = Vec2(vx, vy);
    if (!grads.empty()) {
      grads[i].row(0) = gx.transpose();
      grads[i].row(1) = gy.transpose();
    }
  }
}

void eval_scalar_basis(const ReferenceBasis& basis, const ElementMap& map, const Vec2& xhat,
                       std::span<double> values, std::span<Vec2> grads) {
  basis.eval_scalar(xhat, values, grads);
  if (grads.empty()) return;
  const Mat2 jit = map.inverse_transpose();
  for (int i = 0; i < basis.dim(); ++i) grads[i] = jit * grads[i];
}

void eval_hdiv_basis(const ReferenceBasis& basis, const ElementMap& map, const Vec2& xhat,
                     std::span<Vec2> values, std::span<double> divergences,
                     std::span<Mat2> grads) {
  if (!basis.is_vector()) throw ContractViolation("eval_hdiv_basis needs a BDM/RT basis");
  Mat2 ref_grads[40];
  const int n = basis.dim();
  basis.eval_vector(xhat, values, std::span<Mat2>(ref_grads, n));
  const Mat2& jac = map.jacobian();
  const double inv_det = 1.0 / map.det();
  for (int i = 0; i < n; ++i) {
    values[i] = inv_det * (jac * values[i]);
    if (!divergences.empty()) divergences[i] = inv_det * ref_grads[i].trace();
    if (!grads.empty()) grads[i] = inv_det * (jac * ref_grads[i] * map.jacobian_inverse());
  }
}

}  // namespace vns
