#include <functional>

#include "doctest.h"
#include "helpers.hpp"
#include "vns/analysis.hpp"
#include "vns/errors.hpp"
#include "vns/forms.hpp"
#include "vns/quadrature.hpp"

using namespace vns;

namespace {

double quad(const Vector& x, const SparseMatrix& A) { return x.dot(A * x); }

// Volume integral by sampling the field itself, no assembly tables involved.
double volume_integral(const DiscreteField& w,
                       const std::function<double(const Vec2& x, const Vec2& v, const Mat2& g, double d)>& f) {
  const auto& topo = w.space->topology();
  const auto rule = triangle_rule(3 * w.space->poly_degree() + 2);
  double s = 0;
  for (std::size_t k = 0; k < topo.num_elements(); ++k)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Mat2 g;
      double d;
      const Vec2 v = w.vector_value(k, rule.points[q], &g, &d);
      s += rule.weights[q] * std::abs(topo.maps[k].det()) * f(topo.maps[k].to_physical(rule.points[q]), v, g, d);
    }
  return s;
}

struct SideSample {
  Vec2 v = Vec2::Zero();
  Mat2 g = Mat2::Zero();
};

// Face integral with traces evaluated by inverse-mapping physical points; walled meshes only.
double face_integral(const DiscreteField& w,
                     const std::function<double(const Face&, const SideSample& plus, const SideSample& minus)>& f) {
  const auto& topo = w.space->topology();
  const auto rule = edge_rule(3 * w.space->poly_degree() + 2);
  double s = 0;
  for (const Face& face : topo.faces.faces) {
    const Vec2 a = topo.mesh.vertices[face.vertices[0]], b = topo.mesh.vertices[face.vertices[1]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = a + rule.points[q].x() * (b - a);
      SideSample p, m;
      p.v = w.vector_value(face.plus.element, topo.maps[face.plus.element].to_reference(x), &p.g);
      if (!face.is_boundary())
        m.v = w.vector_value(face.minus.element, topo.maps[face.minus.element].to_reference(x), &m.g);
      s += rule.weights[q] * face.length * f(face, p, m);
    }
  }
  return s;
}

Mat2 sym_pair(const Mat2& g) { return g + g.transpose(); }

}  // namespace

TEST_SUITE("forms") {

TEST_CASE("mass matrix") {
  auto sq = test::unit_square(3);
  auto V = build_function_space(sq, SpaceFamily::BDM, 2);
  SparseMatrix M = assemble_mass_matrix(*V);
  auto one = interpolate_field(V, VectorFunction([](const Vec2&) { return Vec2(1, 0); }));
  CHECK(quad(one.coeffs, M) == doctest::Approx(1.0).epsilon(1e-13));

  std::mt19937_64 rng(1);
  auto w = test::random_field(V, rng);
  const double oracle = volume_integral(w, [](const Vec2&, const Vec2& v, const Mat2&, double) { return v.squaredNorm(); });
  CHECK(std::abs(quad(w.coeffs, M) - oracle) < 1e-12 * std::max(1.0, oracle));
}

TEST_CASE("viscous form against term-by-term quadrature") {
  auto sq = test::unit_square(3);
  auto V = build_function_space(sq, SpaceFamily::BDM, 1);
  FluxParams params;
  params.eta = default_eta(1);
  std::mt19937_64 rng(2);
  for (auto variant : {StressVariant::FullDeviatoric, StressVariant::SymmetricPair, StressVariant::GradientOnly}) {
    SparseMatrix A = assemble_viscous_form(*V, variant, params);
    CHECK(quad(Vector::Zero(V->num_dofs()), A) == 0.0);
    auto w = test::random_field(V, rng);
    const double vol = volume_integral(w, [&](const Vec2&, const Vec2&, const Mat2& g, double) {
      return stress(variant, g).cwiseProduct(g).sum();
    });
    const double consistency = face_integral(w, [&](const Face& f, const SideSample& p, const SideSample& m) {
      const double a = f.is_boundary() ? 1.0 : 0.5;
      const Vec2 avg = a * (stress(variant, p.g) + stress(variant, m.g)) * f.normal;
      return -2.0 * avg.dot(p.v - m.v);
    });
    const double penalty = face_integral(w, [&](const Face& f, const SideSample& p, const SideSample& m) {
      return params.eta / f.length * (p.v - m.v).squaredNorm();
    });
    const double oracle = vol + consistency + penalty;
    CHECK(std::abs(quad(w.coeffs, A) - oracle) < 1e-11 * std::abs(oracle));
  }
}

TEST_CASE("rigid rotation is in the deviatoric kernel") {
  auto sq = test::unit_square(4);
  auto V = build_function_space(sq, SpaceFamily::THVelocity, 2);
  auto w = interpolate_field(V, VectorFunction([](const Vec2& x) { return Vec2(x.y(), -x.x()); }));
  SparseMatrix A = assemble_viscous_form(*V, StressVariant::FullDeviatoric, {});
  CHECK(std::abs(quad(w.coeffs, A)) < 1e-12);
}

TEST_CASE("pressure-divergence form") {
  auto sq = test::unit_square(2);
  auto V = build_function_space(sq, SpaceFamily::BDM, 1);
  auto Q = build_function_space(sq, SpaceFamily::DCPressure, 1);
  SparseMatrix B = assemble_pressure_divergence_form(*V, *Q);
  std::mt19937_64 rng(3);
  auto c = interpolate_field(V, VectorFunction([](const Vec2&) { return Vec2(0.3, -1.2); }));
  auto q = test::random_field(Q, rng);
  CHECK(std::abs(q.coeffs.dot(B * c.coeffs)) < 1e-13);

  auto v = interpolate_field(V, VectorFunction([](const Vec2& x) { return Vec2(x.x(), 0); }));
  Vector ones = Vector::Ones(Q->num_dofs());
  CHECK(ones.dot(B * v.coeffs) == doctest::Approx(1.0).epsilon(1e-13));

  // discrete kernel of B is pointwise solenoidal
  Eigen::MatrixXd Bd(B);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Bd);
  Eigen::MatrixXd ker = lu.kernel();
  REQUIRE(ker.cols() > 0);
  Vector coeffs = ker * Vector::Ones(ker.cols());
  CHECK(max_cellwise_divergence(DiscreteField(V, coeffs)) <= 1e-11 * coeffs.lpNorm<Eigen::Infinity>() * 10);
}

TEST_CASE("convective form") {
  auto box = test::periodic_box(3);
  auto V = build_function_space(box, SpaceFamily::BDM, 1);
  std::mt19937_64 rng(4);
  auto beta = test::random_field(V, rng);
  auto w = test::random_field(V, rng);

  CHECK(assemble_convective_form(*V, DiscreteField(V), 0.5).norm() == 0.0);
  SparseMatrix C0 = assemble_convective_form(*V, beta, 0.0);
  CHECK(std::abs(quad(w.coeffs, C0)) < 1e-11 * C0.norm() * w.coeffs.squaredNorm());

  SparseMatrix C = assemble_convective_form(*V, beta, 0.5);
  const double seminorm = convective_seminorm(beta, w, 0.5);
  CHECK(std::abs(quad(w.coeffs, C) - seminorm * seminorm) < 1e-11 * std::max(1.0, seminorm * seminorm));

  auto dc = build_function_space(box, SpaceFamily::DCPressure, 1);
  auto vdc = build_function_space(box, SpaceFamily::THVelocity, 1);
  CHECK_NOTHROW(assemble_convective_form(*V, interpolate_field(vdc, VectorFunction([](const Vec2&) { return Vec2(1, 1); })), 0.5));
  CHECK_THROWS_AS(assemble_convective_form(*V, DiscreteField(dc), 0.5), ContractViolation);
}

TEST_CASE("central flux is skew on walled zero-boundary spaces") {
  auto sq = test::unit_square(4);
  auto V = build_function_space(sq, SpaceFamily::BDM, 2, {.zero_boundary = true});
  std::mt19937_64 rng(14);
  for (int i = 0; i < 5; ++i) {
    auto beta = test::random_field(V, rng);
    auto w = test::random_field(V, rng);
    SparseMatrix C0 = assemble_convective_form(*V, beta, 0.0);
    CHECK(std::abs(quad(w.coeffs, C0)) < 1e-11 * C0.norm() * w.coeffs.squaredNorm());
  }
}

TEST_CASE("assembler reuse matches one-shot assembly") {
  auto box = test::periodic_box(3);
  auto V = build_function_space(box, SpaceFamily::BDM, 2);
  ConvectionAssembler asmb(*V);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3; ++i) {
    auto beta = test::random_field(V, rng);
    SparseMatrix a = asmb.convective(beta, 0.5), b = assemble_convective_form(*V, beta, 0.5);
    CHECK((a - b).norm() <= 1e-13 * b.norm());
    SparseMatrix s = asmb.graddiv(beta, 10.0), t = assemble_graddiv_stabilization(*V, beta, 10.0);
    CHECK((s - t).norm() <= 1e-13 * std::max(1.0, t.norm()));
  }
}

TEST_CASE("grad-div stabilization") {
  auto sq = test::unit_square(3);
  auto V = build_function_space(sq, SpaceFamily::THVelocity, 2);
  std::mt19937_64 rng(6);
  auto u = test::random_field(V, rng);
  auto w = test::random_field(V, rng);
  CHECK(assemble_graddiv_stabilization(*V, u, 0.0).norm() == 0.0);

  auto one = interpolate_field(V, VectorFunction([](const Vec2&) { return Vec2(1, 0); }));
  auto xw = interpolate_field(V, VectorFunction([](const Vec2& x) { return Vec2(x.x(), 0); }));
  CHECK(quad(xw.coeffs, assemble_graddiv_stabilization(*V, one, 2.5)) == doctest::Approx(2.5).epsilon(1e-12));

  // |u| is not polynomial, so the oracle samples at the assembly rule's points
  SparseMatrix S = assemble_graddiv_stabilization(*V, u, 10.0);
  const auto rule = triangle_rule(volume_quadrature_degree(V->poly_degree()));
  double oracle = 0;
  for (std::size_t k = 0; k < sq->num_elements(); ++k)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double dw;
      const Vec2 uq = u.vector_value(k, rule.points[q]);
      w.vector_value(k, rule.points[q], nullptr, &dw);
      oracle += rule.weights[q] * std::abs(sq->maps[k].det()) * 10.0 * uq.norm() * dw * dw;
    }
  CHECK(std::abs(quad(w.coeffs, S) - oracle) < 1e-12 * oracle);
}

TEST_CASE("load vector") {
  auto sq = test::unit_square(2);
  auto V = build_function_space(sq, SpaceFamily::BDM, 1);
  CHECK(assemble_load_vector(*V, [](const Vec2&, double) { return Vec2(0, 0); }, 0.0).norm() == 0.0);
  Vector f = assemble_load_vector(*V, [](const Vec2&, double) { return Vec2(1, 0); }, 0.0);
  auto one = interpolate_field(V, VectorFunction([](const Vec2&) { return Vec2(1, 0); }));
  CHECK(f.dot(one.coeffs) == doctest::Approx(1.0).epsilon(1e-13));
}

}
