#include "vns/verify.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>
#include <sstream>

#include "vns/analysis.hpp"
#include "vns/forms.hpp"

namespace vns {

namespace {

CheckResult upper_bound(std::string group, std::string name, double value, double tol,
                        std::string detail = {}) {
  return {std::move(group), std::move(name), value <= tol, value, tol, std::move(detail)};
}

std::vector<double> draw(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

SpacePtr walled_bdm(int nx, int degree) {
  auto topo = make_topology(build_structured_triangle_mesh(nx, nx, {0.0, 0.0, 1.0, 1.0}), false, false);
  return build_function_space(topo, SpaceFamily::BDM, degree);
}

}  // namespace

std::vector<CheckResult> verify_identities(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  std::uint64_t seed = o.seed;
  for (IdentityKind kind : {IdentityKind::JumpIdentity, IdentityKind::SemiCoercivity,
                            IdentityKind::Decomposition, IdentityKind::Allaire,
                            IdentityKind::GradDivSign})
    for (int k : {1, 2}) {
      // Taylor-Hood velocities are one degree above the table degree.
      const int degree = kind == IdentityKind::Allaire ? k + 1 : k;
      const IdentitySweep s = run_identity_sweep(kind, degree, o.identity_draws, o.identity_nx, ++seed);
      std::ostringstream name;
      name << identity_name(kind) << " k=" << k;
      std::ostringstream detail;
      detail << s.draws << " draws, degree " << degree;
      out.push_back(upper_bound("identity", name.str(), s.max_relative, 1e-10, detail.str()));
    }
  return out;
}

std::vector<CheckResult> verify_kernel_fields(const VerifyOptions& o) {
  std::mt19937_64 rng(o.seed + 101);
  double r3 = 0.0, r2 = 0.0, fd = 0.0;
  for (int d = 0; d < o.kernel_draws_3d; ++d) {
    const auto k = draw(rng, 10);
    const auto x = draw(rng, 3);
    const Eigen::Vector3d p(x[0], x[1], x[2]);
    r3 = std::max(r3, eval_kernel_field(3, k, p).residual.cwiseAbs().maxCoeff());
    fd = std::max(fd, kernel_field_fd_residual(3, k, p));
  }
  for (int d = 0; d < o.kernel_draws_2d; ++d) {
    const auto k = draw(rng, 3);
    const auto x = draw(rng, 2);
    r2 = std::max(r2, eval_kernel_field(2, k, Eigen::Vector2d(x[0], x[1])).residual.cwiseAbs().maxCoeff());
  }
  return {upper_bound("kernel", "3D closed form", r3, 1e-12,
                      std::to_string(o.kernel_draws_3d) + " draws"),
          upper_bound("kernel", "2D closed form", r2, 1e-12,
                      std::to_string(o.kernel_draws_2d) + " draws"),
          // Central differences with step 1e-6 carry ~1e-10 of rounding.
          upper_bound("kernel", "3D central differences", fd, 1e-8,
                      std::to_string(o.kernel_draws_3d) + " draws, step 1e-6")};
}

std::vector<CheckResult> verify_coercivity(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  for (int degree : {1, 2}) {
    const SpacePtr V = walled_bdm(o.coercivity_nx, degree);
    FluxParams params;
    params.eta = default_eta(degree);
    const CoercivityReport r =
        coercivity_study(*V, StressVariant::FullDeviatoric, params, o.coercivity_draws, o.seed + degree);
    const std::string tag = "BDM_" + std::to_string(degree);
    std::ostringstream detail;
    detail << "eta=" << params.eta << " min a(w,w)=" << r.min_form << " min ratio=" << r.min_ratio
           << " gram eig=" << r.min_gram_eigen;
    out.push_back({"coercivity", tag + " a(w,w) > 0", r.min_form > 0.0, r.min_form, 0.0, detail.str()});
    out.push_back({"coercivity", tag + " a(w,w)/|||w|||^2 > 0", r.min_ratio > 0.0, r.min_ratio, 0.0,
                   "empirical c = " + std::to_string(r.min_ratio)});
    out.push_back(upper_bound("coercivity", tag + " symmetric", r.max_asymmetry, 1e-12));

    const SparseMatrix M = assemble_mass_matrix(*V);
    Eigen::SimplicialLLT<SparseMatrix> llt(M);
    out.push_back({"coercivity", tag + " mass matrix Cholesky", llt.info() == Eigen::Success, 0.0,
                   0.0, std::to_string(M.rows()) + " dofs"});
  }
  return out;
}

std::vector<CheckResult> verify_norm_axioms(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(o.seed + 202);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int degree : {1, 2}) {
    const SpacePtr V = walled_bdm(o.coercivity_nx, degree);
    auto random = [&] {
      DiscreteField w(V);
      for (Eigen::Index i = 0; i < w.coeffs.size(); ++i) w.coeffs(i) = nd(rng);
      return w;
    };
    double homog = 0.0, tri = -1.0;
    for (int d = 0; d < o.norm_pairs; ++d) {
      const DiscreteField a = random(), b = random();
      const double na = sym_triple_norm(a), nb = sym_triple_norm(b);
      const DiscreteField a2(V, -2.5 * a.coeffs);
      homog = std::max(homog, std::abs(sym_triple_norm(a2) - 2.5 * na) / (2.5 * na));
      const DiscreteField ab(V, a.coeffs + b.coeffs);
      tri = std::max(tri, (sym_triple_norm(ab) - na - nb) / (na + nb));
    }
    const std::string tag = "BDM_" + std::to_string(degree);
    out.push_back(upper_bound("norm", tag + " homogeneity", homog, 1e-13));
    out.push_back(upper_bound("norm", tag + " triangle inequality", tri, 1e-14));
    FluxParams params;
    params.eta = default_eta(degree);
    const CoercivityReport r = coercivity_study(*V, StressVariant::FullDeviatoric, params, 1, o.seed);
    out.push_back({"norm", tag + " definiteness (Gram eigenvalue > 0)", r.min_gram_eigen > 0.0,
                   r.min_gram_eigen, 0.0, {}});
  }
  return out;
}

std::vector<CheckResult> run_verification_suite(const VerifyOptions& o) {
  std::vector<CheckResult> all;
  for (auto part : {verify_identities(o), verify_kernel_fields(o), verify_coercivity(o),
                    verify_norm_axioms(o)})
    all.insert(all.end(), part.begin(), part.end());
  return all;
}

}  // namespace vns
