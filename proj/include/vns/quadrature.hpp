#pragma once

#include <vector>

#include "vns/types.hpp"

namespace vns {

/// Quadrature on the reference triangle {x >= 0, y >= 0, x + y <= 1}
/// (measure 1/2) or the reference edge [0, 1] (measure 1). Edge rules store
/// the parameter in points[i].x().
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 24;

/// Conical-product rule exact for total degree <= exact_degree.
QuadratureRule triangle_rule(int exact_degree);

/// Gauss-Legendre on [0, 1] with ceil((exact_degree + 1) / 2) points.
QuadratureRule edge_rule(int exact_degree);

/// Gauss-Jacobi nodes/weights for the weight (1 - x)^alpha (1 + x)^beta on
/// [-1, 1], via the Golub-Welsch eigenvalue method.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);

}  // namespace vns
