#include <cmath>

#include "doctest.h"
#include "vns/errors.hpp"
#include "vns/quadrature.hpp"

using namespace vns;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Integral of x^a y^b over the reference triangle.
double simplex_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double integrate(const QuadratureRule& r, int a, int b) {
  double s = 0;
  for (std::size_t q = 0; q < r.size(); ++q)
    s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
  return s;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("midpoint rule") {
  auto r = triangle_rule(1);
  REQUIRE(r.size() == 1);
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.points[0].x() == doctest::Approx(1.0 / 3));
  CHECK(r.points[0].y() == doctest::Approx(1.0 / 3));
}

TEST_CASE("closed-form monomials") {
  CHECK(std::abs(integrate(triangle_rule(2), 1, 1) - 1.0 / 24) < 1e-14);
  CHECK(std::abs(integrate(triangle_rule(8), 4, 4) - simplex_monomial(4, 4)) < 1e-13);
  CHECK(simplex_monomial(4, 4) == doctest::Approx(1.5873e-4).epsilon(1e-4));
}

TEST_CASE("every supported degree is exact and positive") {
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    auto r = triangle_rule(d);
    CHECK(r.exact_degree >= d);
    for (double w : r.weights) CHECK(w > 0);
    for (const auto& p : r.points) {
      CHECK(p.x() >= 0);
      CHECK(p.y() >= 0);
      CHECK(p.x() + p.y() <= 1 + 1e-15);
    }
    double worst = 0;
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        worst = std::max(worst, std::abs(integrate(r, a, b) - simplex_monomial(a, b)) / simplex_monomial(a, b));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("edge rules") {
  auto r1 = edge_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.points[0].x() == doctest::Approx(0.5));
  CHECK(r1.weights[0] == doctest::Approx(1.0));

  auto moment = [](const QuadratureRule& r, int n) {
    double s = 0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x(), n);
    return s;
  };
  auto r3 = edge_rule(3);
  CHECK(r3.size() == 2);
  CHECK(std::abs(moment(r3, 3) - 0.25) < 1e-15);
  auto r5 = edge_rule(5);
  CHECK(r5.size() == 3);
  CHECK(std::abs(moment(r5, 5) - 1.0 / 6) < 1e-15);
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    auto r = edge_rule(d);
    for (int n = 0; n <= d; ++n) CHECK(std::abs(moment(r, n) - 1.0 / (n + 1)) < 1e-14);
  }
}

TEST_CASE("unsupported degrees") {
  CHECK_THROWS_AS(triangle_rule(0), CapabilityError);
  CHECK_THROWS_AS(triangle_rule(kMaxQuadratureDegree + 1), CapabilityError);
  CHECK_THROWS_AS(edge_rule(-2), CapabilityError);
}

}
