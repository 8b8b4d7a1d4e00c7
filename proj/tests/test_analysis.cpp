#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "vns/analysis.hpp"
#include "vns/cases.hpp"
#include "vns/errors.hpp"
#include "vns/forms.hpp"

using namespace vns;
using std::numbers::pi;

TEST_SUITE("analysis") {

TEST_CASE("observed orders") {
  std::vector<std::pair<double, double>> rows;
  for (double h : {1.0, 0.5, 0.25, 0.2}) rows.push_back({h, 3.7 * h * h * h});
  for (double r : observed_order(rows)) CHECK(std::abs(r - 3.0) < 1e-12);

  auto t3 = observed_order({{0.8886, 1.98e-2}, {0.4443, 2.46e-3}});
  CHECK(t3.back() == doctest::Approx(3.01).epsilon(0.005 / 3.01));
  auto t1 = observed_order({{0.4443, 2.54e-2}, {0.2221, 1.54e-3}});
  CHECK(std::abs(t1.back() - 4.05) < 0.015);

  CHECK_THROWS_AS(observed_order({{0.5, 1e-2}, {0.25, 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(observed_order({{0.5, 1e-2}, {0.5, 1e-3}}), InvalidArgument);
}

TEST_CASE("fill_orders leaves the first row blank") {
  std::vector<ErrorReport> rows{{1, 0.5, 10, 1e-2, 1e-1, 0, 0}, {1, 0.25, 40, 1.25e-3, 2.5e-2, 0, 0}};
  fill_orders(rows);
  CHECK(std::isnan(rows[0].vel_order));
  CHECK(rows[1].vel_order == doctest::Approx(3.0));
  CHECK(rows[1].pres_order == doctest::Approx(2.0));
}

TEST_CASE("L2 errors") {
  auto box = test::periodic_box(8);
  auto V = build_function_space(box, SpaceFamily::BDM, 2);
  auto tg = [](const Vec2& x, double t) { return taylor_green_velocity(x, t, 0.01); };
  CHECK(l2_error(DiscreteField(V), tg, 0.0) == doctest::Approx(std::sqrt(2 * pi * pi)).epsilon(1e-10));
  CHECK(std::sqrt(2 * pi * pi) == doctest::Approx(4.4429).epsilon(1e-4));

  auto sq = test::unit_square(3);
  auto W = build_function_space(sq, SpaceFamily::BDM, 2);
  auto quadratic = [](const Vec2& x, double) { return Vec2(x.x() * x.y(), 1 - x.y() * x.y()); };
  auto wi = interpolate_field(W, VectorFunction([&](const Vec2& x) { return quadratic(x, 0); }));
  CHECK(l2_error(wi, quadratic, 0.0) <= 1e-11);

  // a single basis perturbation
  const double eps = 1e-3;
  DiscreteField e(W);
  e.coeffs(5) = 1.0;
  const double basis_norm = std::sqrt(e.coeffs.dot(assemble_mass_matrix(*W) * e.coeffs));
  DiscreteField pert(W, wi.coeffs + eps * e.coeffs);
  CHECK(l2_error(pert, quadratic, 0.0) == doctest::Approx(eps * basis_norm).epsilon(0.01));

  auto P = build_function_space(sq, SpaceFamily::DCPressure, 2);
  auto q = interpolate_field(P, ScalarFunction([](const Vec2& x) { return x.x() * x.x() - 1.0 / 3; }));
  // only the exact field's mean is removed; q already has zero mean
  auto exact = [](const Vec2& x, double) { return x.x() * x.x() - 10; };
  CHECK(l2_error(q, exact, 0.0) <= 1e-11);
}

TEST_CASE("kinetic energy") {
  auto box = test::periodic_box(16);
  auto V = build_function_space(box, SpaceFamily::BDM, 2);
  CHECK(kinetic_energy(DiscreteField(V)) == 0.0);
  auto u = interpolate_field(V, VectorFunction([](const Vec2& x) { return taylor_green_velocity(x, 0, 0.01); }));
  CHECK(kinetic_energy(u) == doctest::Approx(pi * pi).epsilon(0.01));
}

TEST_CASE("energy decays at the exact rate") {
  CaseConfig c;
  c.nx = c.ny = 8;
  c.k = 2;
  c.t_end = 0.5;
  c.write_fields = false;
  auto res = run_case(setup_case(c));
  const double ratio = res.run.steps.back().kinetic_energy / res.run.steps.front().kinetic_energy;
  CHECK(ratio == doctest::Approx(std::exp(-4 * 0.01 * 0.5)).epsilon(0.02));
}

TEST_CASE("divergence") {
  auto sq = test::unit_square(3);
  auto th = build_function_space(sq, SpaceFamily::THVelocity, 2);
  auto c = interpolate_field(th, VectorFunction([](const Vec2&) { return Vec2(2, -1); }));
  CHECK(max_cellwise_divergence(c) <= 1e-13);
  auto d = interpolate_field(th, VectorFunction([](const Vec2& x) { return Vec2(2 * x.x(), x.x() * x.x()); }));
  CHECK(max_cellwise_divergence(d) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("seminorms") {
  auto sq = test::unit_square(3);
  auto th = build_function_space(sq, SpaceFamily::THVelocity, 2, {.zero_boundary = true});
  std::mt19937_64 rng(12);
  auto w = test::random_field(th, rng);
  CHECK(jump_seminorm(w) <= 1e-12);

  auto bdm = build_function_space(test::periodic_box(3), SpaceFamily::BDM, 1);
  auto b = test::random_field(bdm, rng);
  DiscreteField b2(bdm, 2.0 * b.coeffs);
  CHECK(std::abs(jump_seminorm(b2) - 2 * jump_seminorm(b)) < 1e-13 * jump_seminorm(b));
  CHECK(convective_seminorm(b, b, 0.0) == 0.0);
  CHECK(sym_triple_norm(DiscreteField(bdm)) == 0.0);

  // rotation: no deviatoric strain, only boundary jumps survive
  auto thf = build_function_space(sq, SpaceFamily::THVelocity, 2);
  auto rot = interpolate_field(thf, VectorFunction([](const Vec2& x) { return Vec2(x.y() - 0.5, 0.5 - x.x()); }));
  CHECK(sym_triple_norm(rot, 0.0) < 1e-12);
  CHECK(std::abs(sym_triple_norm(rot) - jump_seminorm(rot)) < 1e-12);
}

TEST_CASE("kernel fields") {
  auto s = eval_kernel_field(2, {1, 0, 0}, Eigen::Vector2d(1, 0));
  CHECK(std::abs(s.value(0)) < 1e-15);
  CHECK(s.value(1) == doctest::Approx(-1.0));
  CHECK(s.residual.norm() < 1e-15);

  std::vector<double> dil(10, 0.0);
  dil[6] = 1.0;
  auto d = eval_kernel_field(3, dil, Eigen::Vector3d(0.3, -0.2, 0.7));
  CHECK((d.value - Eigen::Vector3d(0.3, -0.2, 0.7)).norm() < 1e-15);
  CHECK(d.residual.norm() < 1e-15);

  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> k(10);
    for (auto& v : k) v = g(rng);
    Eigen::Vector3d x(g(rng), g(rng), g(rng));
    CHECK(eval_kernel_field(3, k, x).residual.norm() <= 1e-12);
    CHECK(kernel_field_fd_residual(3, k, x) <= 1e-8);
  }
  CHECK_THROWS_AS(eval_kernel_field(4, dil, Eigen::Vector3d::Zero()), InvalidArgument);
}

TEST_CASE("identity checks on small samples") {
  for (auto kind : {IdentityKind::JumpIdentity, IdentityKind::SemiCoercivity, IdentityKind::Decomposition,
                    IdentityKind::Allaire, IdentityKind::GradDivSign}) {
    auto s = run_identity_sweep(kind, kind == IdentityKind::Allaire ? 2 : 1, 10, 3, 77);
    CHECK_MESSAGE(s.max_relative <= 1e-10, identity_name(kind));
  }
}

TEST_CASE("identity needs the right space") {
  auto sq = test::unit_square(2);
  auto bdm = build_function_space(sq, SpaceFamily::BDM, 1);
  DiscreteField w(bdm);
  CHECK_THROWS_AS(verify_identity(IdentityKind::Allaire, w, w, {}), ContractViolation);
}

}
