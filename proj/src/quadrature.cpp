#include "vns/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "vns/errors.hpp"

namespace vns {

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  const double ab = alpha + beta;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double two_i_ab = 2.0 * i + ab;
    jac(i, i) = i == 0 ? (beta - alpha) / (ab + 2.0)
                       : (beta * beta - alpha * alpha) / (two_i_ab * (two_i_ab + 2.0));
    if (i + 1 < n) {
      const double k = i + 1.0;
      const double t = 2.0 * k + ab;
      const double b = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                                 (t * t * (t + 1.0) * (t - 1.0)));
      jac(i, i + 1) = b;
      jac(i + 1, i) = b;
    }
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

namespace {

void check_degree(int exact_degree) {
  if (exact_degree < 1 || exact_degree > kMaxQuadratureDegree)
    throw CapabilityError("quadrature degree " + std::to_string(exact_degree) +
                          " outside supported range [1, " +
                          std::to_string(kMaxQuadratureDegree) + "]");
}

}  // namespace

QuadratureRule edge_rule(int exact_degree) {
  check_degree(exact_degree);
  const int n = (exact_degree + 2) / 2;
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  QuadratureRule rule;
  rule.exact_degree = exact_degree;
  for (int i = 0; i < n; ++i) {
    rule.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

QuadratureRule triangle_rule(int exact_degree) {
  check_degree(exact_degree);
  const int n = (exact_degree + 2) / 2;
  // x = s, y = t (1 - s): the Jacobian (1 - s) is absorbed into a
  // Gauss-Jacobi(1, 0) rule in s.
  std::vector<double> xs, ws, xt, wt;
  gauss_jacobi(n, 1.0, 0.0, xs, ws);
  gauss_jacobi(n, 0.0, 0.0, xt, wt);
  QuadratureRule rule;
  rule.exact_degree = exact_degree;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (xs[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (xt[j] + 1.0);
      rule.points.emplace_back(s, t * (1.0 - s));
      rule.weights.push_back(0.25 * ws[i] * 0.5 * wt[j]);
    }
  }
  return rule;
}

}  // namespace vns
