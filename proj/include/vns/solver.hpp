#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vns/forms.hpp"
#include "vns/space.hpp"

namespace vns {

/// Velocity/pressure pair with the operators of the chosen formulation.
struct FlowProblem {
  SpacePtr velocity;
  SpacePtr pressure;
  StressVariant variant = StressVariant::SymmetricPair;
  FluxParams flux;
  TimeVectorFunction forcing;  // empty means f = 0
  bool convection = true;      // false gives the Stokes system
};

struct TimeScheme {
  double dt = 0.01;
  double t0 = 0.0;
  double t_end = 1.0;
  int max_order = 3;
  /// Seed the first max_order levels from the exact solution instead of the
  /// BDF1 -> BDF2 -> BDF3 bootstrap.
  bool exact_start = false;

  int num_steps() const;
  void validate() const;
};

/// Weights a_0..a_q of the order-q BDF scheme:
/// (a_0 u^{n+1} - sum_i a_i u^{n+1-i}) / dt.
std::vector<double> bdf_weights(int order);

/// [[K, -B^T, 0], [-B, 0, m], [0, m^T, 0]] (u, p, lambda) = (f, -g, c).
struct SaddleSystem {
  SparseMatrix K;
  SparseMatrix B;
  Vector mean;
  Vector f;
  Vector g;  // empty means zero
  double mean_value = 0.0;
};

struct SaddleSolution {
  Vector u;
  Vector p;
  double multiplier = 0.0;
  double residual = 0.0;  // ||rhs - Op x||_inf / ||rhs||_inf
};

/// Sparse LU of the saddle matrix with one pressure dof pinned; the mean
/// constraint is added back by bordering. With reuse on, later systems are
/// first solved by defect correction against the stored factors, and
/// refactorized only if that stalls. Every returned solution has a relative
/// residual of at most 1e-9 for the exact system.
class SaddleSolver {
 public:
  explicit SaddleSolver(bool reuse_factorization = true);
  ~SaddleSolver();
  SaddleSolver(SaddleSolver&&) noexcept;
  SaddleSolver& operator=(SaddleSolver&&) noexcept;

  /// `guess` (optional) starts the correction.
  SaddleSolution solve(const SaddleSystem& sys, const SaddleSolution* guess = nullptr);
  int factorizations() const;
  int sweeps() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SaddleSolution solve_saddle_system(const SaddleSystem& sys);

/// Divergence-free L2 projection: min ||u - u0|| subject to b_h(u, q) = 0.
DiscreteField project_divergence_free(const DiscreteField& u0, SpacePtr pressure);

struct PicardResult {
  DiscreteField u;
  DiscreteField p;
  int iterations = 0;
  std::vector<double> updates;  // ||du||_inf / max(1, ||u||_inf) per iteration
  double solve_residual = 0.0;
};

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Operators that do not depend on the iterate.
struct FlowOperators {
  SparseMatrix M;
  SparseMatrix A;
  SparseMatrix B;
  Vector mean;
  std::shared_ptr<const ConvectionAssembler> iterate;  // C(beta) and S(beta)
};
FlowOperators assemble_flow_operators(const FlowProblem& problem);

/// Fixed-point iteration u -> solve(K(beta = u)) for one implicit step with
/// K = mass_scale M + nu A + C(beta) + S(beta) and momentum rhs `rhs`.
PicardResult picard_iterate(const FlowProblem& problem, const FlowOperators& ops,
                            SaddleSolver& solver, double mass_scale, const Vector& rhs,
                            const DiscreteField& guess, const PicardOptions& options = {},
                            const DiscreteField* pressure_guess = nullptr);

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;
  int bdf_order = 0;
  double kinetic_energy = 0.0;
  double max_divergence = 0.0;
  int picard_iterations = 0;
};

struct RunResult {
  DiscreteField u;
  DiscreteField p;
  double t = 0.0;
  std::vector<StepDiagnostics> steps;
};

using StepObserver =
    std::function<void(const StepDiagnostics&, const DiscreteField&, const DiscreteField&)>;

/// Initial data: exact velocity (used for the seeded history when
/// scheme.exact_start is set) or an initial velocity at t0.
struct InitialData {
  TimeVectorFunction velocity;
  /// Pressure reported with a seeded level (optional; zero otherwise).
  std::function<DiscreteField(const DiscreteField& u, double t)> pressure;
};

/// Time loop. Levels are interpolated (and projected onto discretely
/// divergence-free fields for H(div) velocities), then advanced with BDF and
/// Picard at every step.
RunResult integrate(const FlowProblem& problem, const TimeScheme& scheme,
                    const InitialData& initial, const StepObserver& observer = {},
                    const PicardOptions& picard = {});

/// Pressure consistent with a given velocity: the pressure part of
/// M a - B^T p = f(t) - (nu A + C(u)) u, B a = 0.
DiscreteField consistent_pressure(const FlowProblem& problem, const DiscreteField& u, double t);

/// One implicit BDF step from the given history (newest first).
struct StepResult {
  DiscreteField u;
  DiscreteField p;
  int picard_iterations = 0;
};
StepResult bdf_advance(const FlowProblem& problem, const FlowOperators& ops, SaddleSolver& solver,
                       const std::vector<DiscreteField>& history, int order, double t_next,
                       double dt, const PicardOptions& picard = {},
                       const DiscreteField* pressure_guess = nullptr);

}  // namespace vns
