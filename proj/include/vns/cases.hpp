#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vns/analysis.hpp"
#include "vns/config.hpp"
#include "vns/solver.hpp"

namespace vns {

/// Taylor-Green vortex on [0, 2pi]^2.
Vec2 taylor_green_velocity(const Vec2& x, double t, double nu);
double taylor_green_pressure(const Vec2& x, double t, double nu);
/// Scalar vorticity d1 u2 - d2 u1 of the Taylor-Green velocity.
double taylor_green_vorticity(const Vec2& x, double t, double nu);

/// Gresho vortex on (-0.5, 0.5)^2: 5r up to r = 0.2, 2 - 5r up to 0.4, zero beyond.
double gresho_angular_velocity(double r);
Vec2 gresho_velocity(const Vec2& x);

using ScalarTimeFunction = std::function<double(const Vec2&, double)>;

struct CaseSetup {
  CaseConfig config;
  std::shared_ptr<const Topology> topology;
  FlowProblem problem;
  TimeScheme scheme;
  InitialData initial;
  TimeVectorFunction exact_velocity;  // empty without an exact solution
  ScalarTimeFunction exact_pressure;

  bool has_exact() const { return static_cast<bool>(exact_velocity); }
  double h() const { return topology->mesh.max_edge_length(); }
  /// Velocity + pressure + the mean multiplier.
  long dof() const;
};

CaseSetup setup_case(const CaseConfig& config);

struct CaseResult {
  RunResult run;
  double h = 0.0;
  long dof = 0;
  double vel_error = 0.0;   // NaN without an exact solution
  double pres_error = 0.0;
  double max_speed = 0.0;   // at the final time
};

CaseResult run_case(const CaseSetup& setup, const StepObserver& observer = {});

/// One run per entry of config.nx_list (nx = ny); rows carry errors and orders.
std::vector<ErrorReport> run_convergence(
    const CaseConfig& config,
    const std::function<void(const ErrorReport&, const CaseResult&)>& on_row = {});

}  // namespace vns
