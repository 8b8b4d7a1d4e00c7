#include "vns/solver.hpp"

#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include <atomic>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "vns/analysis.hpp"
#include "vns/errors.hpp"

namespace vns {

int TimeScheme::num_steps() const {
  const double span = (t_end - t0) / dt;
  return static_cast<int>(std::llround(span));
}

void TimeScheme::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(t_end - t0 >= dt * (1.0 - 1e-12))) throw InvalidArgument("t_end must be at least t0 + dt");
  const double span = (t_end - t0) / dt;
  if (std::abs(span - std::round(span)) > 1e-8 * std::max(1.0, span))
    throw InvalidArgument("t_end - t0 must be a whole number of time steps");
  if (max_order < 1 || max_order > 3) throw InvalidArgument("BDF order must be 1, 2 or 3");
}

std::vector<double> bdf_weights(int order) {
  switch (order) {
    case 1: return {1.0, 1.0};
    case 2: return {1.5, 2.0, -0.5};
    case 3: return {11.0 / 6.0, 3.0, -1.5, 1.0 / 3.0};
  }
  throw InvalidArgument("BDF order must be 1, 2 or 3");
}

namespace {

void check_shapes(const SaddleSystem& s) {
  if (s.K.rows() != s.K.cols()) throw InvalidArgument("velocity block must be square");
  if (s.B.cols() != s.K.rows()) throw InvalidArgument("divergence block width mismatch");
  if (s.mean.size() != s.B.rows()) throw InvalidArgument("mean row length mismatch");
  if (s.f.size() != s.K.rows()) throw InvalidArgument("momentum rhs length mismatch");
  if (s.g.size() != 0 && s.g.size() != s.B.rows()) throw InvalidArgument("mass rhs length mismatch");
  if (s.B.rows() == 0) throw InvalidArgument("pressure space is empty");
}

// [[K, -B^T], [-B, alpha e e^T]] with e the first pressure dof. The dense
// mean row is handled by bordering, so the factorized matrix stays sparse.
SparseMatrix pinned_matrix(const SaddleSystem& s, double alpha) {
  const int nu = static_cast<int>(s.K.rows());
  const int np = static_cast<int>(s.B.rows());
  std::vector<Triplet> t;
  t.reserve(s.K.nonZeros() + 2 * s.B.nonZeros() + 1);
  for (int j = 0; j < s.K.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s.K, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < s.B.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s.B, j); it; ++it) {
      t.emplace_back(it.col(), nu + it.row(), -it.value());
      t.emplace_back(nu + it.row(), it.col(), -it.value());
    }
  t.emplace_back(nu, nu, alpha);
  SparseMatrix A(nu + np, nu + np);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

struct Backend {
  virtual ~Backend() = default;
  virtual void analyze(const SparseMatrix& A) = 0;
  virtual bool factorize(const SparseMatrix& A) = 0;
  virtual Vector solve(const Vector& b) const = 0;
};

struct UmfBackend final : Backend {
  Eigen::UmfPackLU<SparseMatrix> lu;
  // Refinement is done by the caller against the bordered operator.
  UmfBackend() { lu.umfpackControl()(UMFPACK_IRSTEP) = 0; }
  void analyze(const SparseMatrix& A) override { lu.analyzePattern(A); }
  bool factorize(const SparseMatrix& A) override {
    lu.factorize(A);
    return lu.info() == Eigen::Success;
  }
  Vector solve(const Vector& b) const override { return lu.solve(b); }
};

struct SluBackend final : Backend {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  void analyze(const SparseMatrix& A) override { lu.analyzePattern(A); }
  bool factorize(const SparseMatrix& A) override {
    lu.factorize(A);
    return lu.info() == Eigen::Success;
  }
  Vector solve(const Vector& b) const override { return lu.solve(b); }
};

// Set once UMFPACK has returned a factorization that fails verification
// (seen with some optimized BLAS builds); later solvers go straight to SparseLU.
std::atomic<bool> g_umfpack_unreliable{false};

}  // namespace

struct SaddleSolver::Impl {
  std::unique_ptr<Backend> lu;
  bool fallback = false;
  std::vector<int> outer, inner;
  bool analyzed = false;
  bool factored = false;
  bool reuse = true;
  int factorizations = 0;
  int sweeps = 0;
  bool stale = false;  // the last reuse needed many sweeps; refactorize next time

  int nu = 0, np = 0;
  double alpha = 1.0;
  SparseMatrix P;  // UmfPackLU keeps a view of the factorized matrix
  Vector xe, xc;   // P^-1 e and P^-1 (0, m)
  Eigen::Matrix2d border;
  Eigen::PartialPivLU<Eigen::Matrix2d> border_lu;

  bool same_pattern(const SparseMatrix& A) const {
    if (!analyzed || A.outerSize() + 1 != static_cast<Eigen::Index>(outer.size())) return false;
    if (A.nonZeros() != static_cast<Eigen::Index>(inner.size())) return false;
    return std::equal(outer.begin(), outer.end(), A.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), A.innerIndexPtr());
  }

  void make_backend() {
    fallback = fallback || g_umfpack_unreliable.load();
    if (fallback)
      lu = std::make_unique<SluBackend>();
    else
      lu = std::make_unique<UmfBackend>();
    analyzed = false;
    factored = false;
  }

  void factorize(const SaddleSystem& sys) {
    if (!lu) make_backend();
    nu = static_cast<int>(sys.K.rows());
    np = static_cast<int>(sys.B.rows());
    const double bmax = sys.B.nonZeros() ? sys.B.coeffs().cwiseAbs().maxCoeff() : 0.0;
    // pin weight on the scale of the Schur complement B K^-1 B^T
    const double kmax = sys.K.diagonal().cwiseAbs().maxCoeff();
    alpha = bmax > 0.0 ? bmax : 1.0;
    if (bmax > 0.0 && kmax > 0.0) alpha = bmax * bmax / kmax;
    P = pinned_matrix(sys, alpha);
    if (!same_pattern(P)) {
      lu->analyze(P);
      outer.assign(P.outerIndexPtr(), P.outerIndexPtr() + P.outerSize() + 1);
      inner.assign(P.innerIndexPtr(), P.innerIndexPtr() + P.nonZeros());
      analyzed = true;
    }
    factored = false;
    ++factorizations;
    if (!lu->factorize(P)) {
      analyzed = false;
      factored = false;
      bool empty_column = false;
      for (int j = 0; j < sys.K.outerSize() && !empty_column; ++j) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(sys.K, j); it; ++it) s += std::abs(it.value());
        empty_column = s == 0.0;
      }
      if (empty_column || sys.K.nonZeros() == 0)
        throw SolverError("singular factorization: zero pivot in the velocity block K");
      throw SolverError(
          "singular factorization: zero pivot in the saddle matrix (velocity block or a "
          "divergence constraint with a null space beyond constants)");
    }
    Vector e = Vector::Zero(nu + np);
    e(nu) = 1.0;
    xe = lu->solve(e);
    Vector c = Vector::Zero(nu + np);
    c.tail(np) = sys.mean;
    xc = lu->solve(c);
    border << 1.0 - alpha * xe(nu), alpha * xc(nu), sys.mean.dot(xe.tail(np)),
        -sys.mean.dot(xc.tail(np));
    const double scale = border.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale) || std::abs(border.determinant()) <= 1e-14 * scale * scale)
      throw SolverError(
          "singular factorization: the pressure mean constraint is rank deficient");
    border_lu.compute(border);
    factored = true;
  }

  // Exact inverse of the bordered matrix built from the factorized operator.
  void bordered_solve(const Vector& r, double s, const Vector& mean, Vector& x, double& lambda) const {
    const Vector xr = lu->solve(r);
    Eigen::Vector2d rhs(alpha * xr(nu), s - mean.dot(xr.tail(np)));
    const Eigen::Vector2d ml = border_lu.solve(rhs);
    x = xr + ml(0) * xe - ml(1) * xc;
    lambda = ml(1);
  }
};

namespace {

// rhs - Op (x, lambda) for the bordered operator; returns the scalar row separately.
double saddle_residual(const SaddleSystem& sys, const Vector& rhs, double rhs_mean, const Vector& x,
                       double lambda, Vector& r) {
  const int nu = static_cast<int>(sys.K.rows());
  const int np = static_cast<int>(sys.B.rows());
  r.resize(nu + np);
  r.head(nu) = rhs.head(nu) - sys.K * x.head(nu) + sys.B.transpose() * x.tail(np);
  r.tail(np) = rhs.tail(np) + sys.B * x.head(nu) - sys.mean * lambda;
  return rhs_mean - sys.mean.dot(x.tail(np));
}

}  // namespace

SaddleSolver::SaddleSolver(bool reuse_factorization) : impl_(std::make_unique<Impl>()) {
  impl_->reuse = reuse_factorization;
}
SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

int SaddleSolver::factorizations() const { return impl_->factorizations; }
int SaddleSolver::sweeps() const { return impl_->sweeps; }

SaddleSolution SaddleSolver::solve(const SaddleSystem& sys, const SaddleSolution* guess) {
  check_shapes(sys);
  Impl& m = *impl_;
  const int nu = static_cast<int>(sys.K.rows());
  const int np = static_cast<int>(sys.B.rows());
  Vector rhs(nu + np);
  rhs.head(nu) = sys.f;
  rhs.tail(np) = sys.g.size() ? Vector(-sys.g) : Vector::Zero(np);
  const double rhs_norm = std::max(rhs.lpNorm<Eigen::Infinity>(), std::abs(sys.mean_value));

  SaddleSolution out;
  if (rhs_norm == 0.0) {
    out.u = Vector::Zero(nu);
    out.p = Vector::Zero(np);
    return out;
  }

  Vector x, r;
  double lambda = 0.0;
  // Defect correction with the current factorization; true for a residual
  // at roundoff level, false when the iteration stalls above it.
  const bool warm = guess && guess->u.size() == nu && guess->p.size() == np;
  auto correct = [&](int max_sweeps) {
    if (warm) {
      x.resize(nu + np);
      x << guess->u, guess->p;
      lambda = guess->multiplier;
    } else {
      x = Vector::Zero(nu + np);
      lambda = 0.0;
    }
    double prev = 1.0;
    for (int k = 0; k < max_sweeps; ++k) {
      const double rs = saddle_residual(sys, rhs, sys.mean_value, x, lambda, r);
      const double rel = std::max(r.lpNorm<Eigen::Infinity>(), std::abs(rs)) / rhs_norm;
      if (!std::isfinite(rel)) return false;
      if (rel <= 1e-14 || (k > 0 && rel <= 1e-12 && rel > 0.25 * prev)) return true;
      if (k > 1 && rel > 0.5 * prev) return false;
      prev = rel;
      Vector dx;
      double dl = 0.0;
      m.bordered_solve(r, rs, sys.mean, dx, dl);
      x += dx;
      lambda += dl;
      ++m.sweeps;
    }
    return false;
  };
  auto final_residual = [&] {
    const double rs = saddle_residual(sys, rhs, sys.mean_value, x, lambda, r);
    return std::max(r.lpNorm<Eigen::Infinity>(), std::abs(rs)) / rhs_norm;
  };

  const int sweeps_before = m.sweeps;
  bool done = m.reuse && m.factored && !m.stale && m.nu == nu && m.np == np && correct(30);
  // a factorization costs a few dozen sweeps; refresh once reuse gets expensive
  m.stale = done && m.sweeps - sweeps_before > 5;
  if (!done) {
    bool singular = false;
    try {
      m.factorize(sys);
      done = correct(6);
    } catch (const SolverError&) {
      if (m.fallback) throw;
      singular = true;
    }
    if (!m.fallback && (singular || (!done && final_residual() > 1e-9))) {
      // second opinion; a genuinely singular system throws here as well
      m.fallback = true;
      m.make_backend();
      m.factorize(sys);
      correct(6);
      g_umfpack_unreliable = true;
    }
  }
  const double rel = final_residual();
  if (!(rel <= 1e-9)) {
    m.factored = false;
    std::ostringstream os;
    os << "saddle solve residual " << rel << " exceeds 1e-9";
    throw SolverError(os.str());
  }
  out.u = x.head(nu);
  out.p = x.tail(np);
  out.multiplier = lambda;
  out.residual = rel;
  return out;
}

SaddleSolution solve_saddle_system(const SaddleSystem& sys) {
  SaddleSolver s(false);
  return s.solve(sys, nullptr);
}

FlowOperators assemble_flow_operators(const FlowProblem& problem) {
  FlowOperators ops;
  ops.M = assemble_mass_matrix(*problem.velocity);
  ops.A = assemble_viscous_form(*problem.velocity, problem.variant, problem.flux);
  ops.B = assemble_pressure_divergence_form(*problem.velocity, *problem.pressure);
  ops.mean = assemble_pressure_mean(*problem.pressure);
  ops.iterate = std::make_shared<ConvectionAssembler>(*problem.velocity);
  return ops;
}

DiscreteField project_divergence_free(const DiscreteField& u0, SpacePtr pressure) {
  const FunctionSpace& V = *u0.space;
  SaddleSystem sys;
  sys.K = assemble_mass_matrix(V);
  sys.B = assemble_pressure_divergence_form(V, *pressure);
  sys.mean = assemble_pressure_mean(*pressure);
  sys.f = sys.K * u0.coeffs;
  const SaddleSolution s = solve_saddle_system(sys);
  return DiscreteField(u0.space, s.u);
}

DiscreteField consistent_pressure(const FlowProblem& problem, const DiscreteField& u, double t) {
  const FunctionSpace& V = *problem.velocity;
  SaddleSystem sys;
  sys.K = assemble_mass_matrix(V);
  sys.B = assemble_pressure_divergence_form(V, *problem.pressure);
  sys.mean = assemble_pressure_mean(*problem.pressure);
  SparseMatrix L = problem.flux.nu * assemble_viscous_form(V, problem.variant, problem.flux);
  if (problem.convection) L += assemble_convective_form(V, u, problem.flux.zeta);
  sys.f = -(L * u.coeffs);
  if (problem.forcing) sys.f += assemble_load_vector(V, problem.forcing, t);
  return DiscreteField(problem.pressure, solve_saddle_system(sys).p);
}

PicardResult picard_iterate(const FlowProblem& problem, const FlowOperators& ops,
                            SaddleSolver& solver, double mass_scale, const Vector& rhs,
                            const DiscreteField& guess, const PicardOptions& options,
                            const DiscreteField* pressure_guess) {
  const double nu = problem.flux.nu;
  std::shared_ptr<const ConvectionAssembler> iterate_ptr = ops.iterate;
  if (!iterate_ptr) iterate_ptr = std::make_shared<ConvectionAssembler>(*problem.velocity);
  const ConvectionAssembler& iterate = *iterate_ptr;
  SparseMatrix base = mass_scale * ops.M + nu * ops.A;
  const bool nonlinear = problem.convection || problem.flux.delta > 0.0;

  SaddleSystem sys;
  sys.B = ops.B;
  sys.mean = ops.mean;
  sys.f = rhs;

  PicardResult res;
  DiscreteField beta = guess;
  SaddleSolution prev;
  prev.u = guess.coeffs;
  prev.p = pressure_guess ? pressure_guess->coeffs : Vector::Zero(ops.B.rows());
  for (int it = 1; it <= options.max_iter; ++it) {
    sys.K = base;
    if (problem.convection) sys.K += iterate.convective(beta, problem.flux.zeta);
    if (problem.flux.delta > 0.0) sys.K += iterate.graddiv(beta, problem.flux.delta);
    SaddleSolution s = solver.solve(sys, &prev);
    const double unorm = s.u.lpNorm<Eigen::Infinity>();
    const double upd =
        (s.u - beta.coeffs).lpNorm<Eigen::Infinity>() / std::max(1.0, unorm);
    res.updates.push_back(upd);
    res.iterations = it;
    res.solve_residual = s.residual;
    beta.coeffs = s.u;
    prev = std::move(s);
    if (!std::isfinite(upd))
      throw NonlinearDivergence("Picard iteration produced a non-finite update", res.updates);
    if (!nonlinear || upd <= options.tol) {
      res.u = beta;
      res.p = DiscreteField(problem.pressure, prev.p);
      return res;
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not converge in " << options.max_iter << " iterations (last update "
     << res.updates.back() << ")";
  throw NonlinearDivergence(os.str(), res.updates);
}

StepResult bdf_advance(const FlowProblem& problem, const FlowOperators& ops, SaddleSolver& solver,
                       const std::vector<DiscreteField>& history, int order, double t_next,
                       double dt, const PicardOptions& picard,
                       const DiscreteField* pressure_guess) {
  if (static_cast<int>(history.size()) < order)
    throw InvalidArgument("BDF history shorter than the requested order");
  const auto a = bdf_weights(order);
  Vector past = Vector::Zero(problem.velocity->num_dofs());
  for (int i = 1; i <= order; ++i) past += a[i] * history[i - 1].coeffs;
  Vector rhs = ops.M * past / dt;
  if (problem.forcing) rhs += assemble_load_vector(*problem.velocity, problem.forcing, t_next);

  DiscreteField guess = history[0];
  if (order == 2) guess.coeffs = 2.0 * history[0].coeffs - history[1].coeffs;
  if (order == 3)
    guess.coeffs = 3.0 * history[0].coeffs - 3.0 * history[1].coeffs + history[2].coeffs;

  PicardResult pr = picard_iterate(problem, ops, solver, a[0] / dt, rhs, guess, picard, pressure_guess);
  return {std::move(pr.u), std::move(pr.p), pr.iterations};
}

RunResult integrate(const FlowProblem& problem, const TimeScheme& scheme,
                    const InitialData& initial, const StepObserver& observer,
                    const PicardOptions& picard) {
  scheme.validate();
  if (!initial.velocity) throw InvalidArgument("initial velocity is required");
  const FlowOperators ops = assemble_flow_operators(problem);
  SaddleSolver solver;
  const SpacePtr V = problem.velocity;

  auto level = [&](double t) {
    DiscreteField u = interpolate_field(
        V, VectorFunction([&](const Vec2& x) { return initial.velocity(x, t); }));
    if (V->is_hdiv()) u = project_divergence_free(u, problem.pressure);
    return u;
  };

  RunResult run;
  run.p = DiscreteField(problem.pressure);
  auto seeded_pressure = [&](const DiscreteField& u, double t) {
    return initial.pressure ? initial.pressure(u, t) : DiscreteField(problem.pressure);
  };
  auto record = [&](int step, double t, int order, int iters, const DiscreteField& u,
                    const DiscreteField& p) {
    StepDiagnostics d;
    d.step = step;
    d.t = t;
    d.bdf_order = order;
    d.kinetic_energy = 0.5 * u.coeffs.dot(ops.M * u.coeffs);
    d.max_divergence = max_cellwise_divergence(u);
    d.picard_iterations = iters;
    run.steps.push_back(d);
    if (observer) observer(d, u, p);
  };

  const int n_steps = scheme.num_steps();
  const double dt = scheme.dt;
  std::vector<DiscreteField> history;  // newest first
  int first = 0;
  if (scheme.exact_start) {
    const int seeded = std::min(scheme.max_order, n_steps + 1);
    for (int i = 0; i < seeded; ++i) {
      const double t = scheme.t0 + i * dt;
      history.insert(history.begin(), level(t));
      run.p = seeded_pressure(history.front(), t);
      record(i, t, 0, 0, history.front(), run.p);
    }
    first = seeded - 1;
  } else {
    history.push_back(level(scheme.t0));
    run.p = seeded_pressure(history.front(), scheme.t0);
    record(0, scheme.t0, 0, 0, history.front(), run.p);
  }

  for (int n = first; n < n_steps; ++n) {
    const double t_next = scheme.t0 + (n + 1) * dt;
    const int order = std::min<int>(scheme.max_order, static_cast<int>(history.size()));
    StepResult s = bdf_advance(problem, ops, solver, history, order, t_next, dt, picard, &run.p);
    history.insert(history.begin(), s.u);
    if (static_cast<int>(history.size()) > scheme.max_order) history.pop_back();
    run.p = std::move(s.p);
    record(n + 1, t_next, order, s.picard_iterations, history.front(), run.p);
  }
  run.u = history.front();
  run.t = scheme.t0 + n_steps * dt;
  return run;
}

}  // namespace vns
