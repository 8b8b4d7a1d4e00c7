#include "vns/cases.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vns/errors.hpp"

namespace vns {

Vec2 taylor_green_velocity(const Vec2& x, double t, double nu) {
  const double e = std::exp(-2.0 * nu * t);
  return {std::sin(x.x()) * std::cos(x.y()) * e, -std::cos(x.x()) * std::sin(x.y()) * e};
}

double taylor_green_pressure(const Vec2& x, double t, double nu) {
  return 0.25 * (std::cos(2.0 * x.x()) + std::cos(2.0 * x.y())) * std::exp(-4.0 * nu * t);
}

double taylor_green_vorticity(const Vec2& x, double t, double nu) {
  return 2.0 * std::sin(x.x()) * std::sin(x.y()) * std::exp(-2.0 * nu * t);
}

double gresho_angular_velocity(double r) {
  if (r <= 0.2) return 5.0 * r;
  if (r <= 0.4) return 2.0 - 5.0 * r;
  return 0.0;
}

Vec2 gresho_velocity(const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) return Vec2::Zero();
  const double u = gresho_angular_velocity(r);
  return {-u * x.y() / r, u * x.x() / r};
}

long CaseSetup::dof() const {
  return static_cast<long>(problem.velocity->num_dofs()) + problem.pressure->num_dofs() + 1;
}

CaseSetup setup_case(const CaseConfig& config) {
  CaseSetup s;
  s.config = config;
  const bool tg = config.case_kind == CaseKind::TaylorGreen;
  const double two_pi = 2.0 * std::numbers::pi;
  const Rectangle rect = tg ? Rectangle{0.0, 0.0, two_pi, two_pi} : Rectangle{-0.5, -0.5, 0.5, 0.5};
  s.topology = make_topology(build_structured_triangle_mesh(config.nx, config.ny, rect), tg, tg);

  const Discretization d = discretization(config.formulation, config.k);
  SpaceOptions vopt;
  vopt.zero_boundary = !tg;
  s.problem.velocity = build_function_space(s.topology, d.velocity, d.velocity_degree, vopt);
  s.problem.pressure = build_function_space(s.topology, d.pressure, d.pressure_degree);
  s.problem.variant = d.variant;
  s.problem.flux = config.flux();

  s.scheme.dt = config.dt;
  s.scheme.t0 = 0.0;
  s.scheme.t_end = config.t_end;
  s.scheme.max_order = config.bdf_order;
  s.scheme.exact_start = config.exact_start;

  if (tg) {
    const double nu = config.nu;
    s.exact_velocity = [nu](const Vec2& x, double t) -> Vec2 {
      return taylor_green_velocity(x, t, nu);
    };
    s.exact_pressure = [nu](const Vec2& x, double t) { return taylor_green_pressure(x, t, nu); };
    s.initial.velocity = s.exact_velocity;
    const SpacePtr Q = s.problem.pressure;
    s.initial.pressure = [Q, nu](const DiscreteField&, double t) {
      return interpolate_field(
          Q, ScalarFunction([nu, t](const Vec2& x) { return taylor_green_pressure(x, t, nu); }));
    };
  } else {
    s.initial.velocity = [](const Vec2& x, double) -> Vec2 { return gresho_velocity(x); };
    const FlowProblem problem = s.problem;
    s.initial.pressure = [problem](const DiscreteField& u, double t) {
      return consistent_pressure(problem, u, t);
    };
  }
  return s;
}

CaseResult run_case(const CaseSetup& setup, const StepObserver& observer) {
  CaseResult r;
  r.run = integrate(setup.problem, setup.scheme, setup.initial, observer);
  r.h = setup.h();
  r.dof = setup.dof();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.vel_error = setup.has_exact() ? l2_error(r.run.u, setup.exact_velocity, r.run.t) : nan;
  r.pres_error = setup.has_exact() ? l2_error(r.run.p, setup.exact_pressure, r.run.t) : nan;
  r.max_speed = max_speed(r.run.u);
  return r;
}

std::vector<ErrorReport> run_convergence(
    const CaseConfig& config,
    const std::function<void(const ErrorReport&, const CaseResult&)>& on_row) {
  if (config.case_kind != CaseKind::TaylorGreen)
    throw InvalidArgument("convergence studies need a case with an exact solution");
  std::vector<ErrorReport> rows;
  for (int n : config.nx_list) {
    CaseConfig c = config;
    c.nx = c.ny = n;
    CaseResult res = run_case(setup_case(c));
    ErrorReport row;
    row.k = c.k;
    row.h = res.h;
    row.dof = res.dof;
    row.vel_l2 = res.vel_error;
    row.pres_l2 = res.pres_error;
    rows.push_back(row);
    fill_orders(rows);
    if (on_row) on_row(rows.back(), res);
  }
  return rows;
}

}  // namespace vns
