#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vns/forms.hpp"
#include "vns/space.hpp"

namespace vns {

/// Error quadrature degree for local polynomial degree p (capped at the
/// highest supported rule).
int error_quadrature_degree(int p);

/// (||grad w + grad w^T - (2/3)(div w) I||^2 + jump_weight * |w|_J^2)^(1/2),
/// boundary faces included one-sided.
double sym_triple_norm(const DiscreteField& w, double jump_weight = 1.0);

/// (sum_F h_F^-1 ||[[w]]||^2_F)^(1/2).
double jump_seminorm(const DiscreteField& w);

/// (zeta sum_F int |beta.n_F| |[[w]]|^2)^(1/2).
double convective_seminorm(const DiscreteField& beta, const DiscreteField& w, double zeta);

/// ||f_exact - f_h||_L2 at time t.
double l2_error(const DiscreteField& fh, const TimeVectorFunction& exact, double t);
/// Scalar version; the mean of the exact field is removed before comparing.
double l2_error(const DiscreteField& fh, const std::function<double(const Vec2&, double)>& exact,
                double t);

/// rate_i = log(e_{i-1} / e_i) / log(h_{i-1} / h_i); one fewer entry than the input.
std::vector<double> observed_order(const std::vector<std::pair<double, double>>& h_and_error);

/// 1/2 ||u||^2.
double kinetic_energy(const DiscreteField& u);

/// max |div u_h| over the volume quadrature points of every element.
double max_cellwise_divergence(const DiscreteField& u);

/// Reference points (i/r, j/r), i + j <= r, ordered with j outer and i inner.
std::vector<Vec2> reference_lattice(int r);

/// max |u_h| over the order-`level` lattice of every element (level 0 picks
/// max(2, local degree)).
double max_speed(const DiscreteField& u, int level = 0);

struct KernelSample {
  Eigen::VectorXd value;
  Eigen::MatrixXd grad;      // grad(i, j) = d w_i / d x_j
  Eigen::MatrixXd residual;  // grad + grad^T - (2/3)(div w) I
};

/// Kernel fields of the deviatoric symmetric gradient. dim 2 uses k1..k3
/// (rotation + translation), dim 3 uses k1..k10.
KernelSample eval_kernel_field(int dim, const std::vector<double>& k, const Eigen::VectorXd& x);

/// Central-difference check of the closed-form kernel gradient: returns the
/// max deviatoric-symmetric residual of the numerically differentiated field.
double kernel_field_fd_residual(int dim, const std::vector<double>& k, const Eigen::VectorXd& x,
                                double step = 1e-6);

enum class IdentityKind { JumpIdentity, SemiCoercivity, Decomposition, Allaire, GradDivSign };

const char* identity_name(IdentityKind kind);

struct IdentityResult {
  double residual = 0.0;  // |lhs - rhs|
  double scale = 0.0;     // magnitude of the individual terms
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

/// Checks one identity for the given fields.
///  - JumpIdentity: (beta.grad w, w) + 1/2((div beta) w, w) - sum_F <(beta.n)[[w]], {{w}}> = 0
///  - SemiCoercivity: w^T C(beta) w = zeta sum_F int |beta.n| |[[w]]|^2
///  - Decomposition: w^T A w (full deviatoric, assembled) against its term-by-term split
///  - Allaire: (grad w^T, grad w) = ||div w||^2 for zero-boundary continuous w
///  - GradDivSign: A_full,vol - A_pair,vol = -(2/3)(div, div) as matrices (w unused)
IdentityResult verify_identity(IdentityKind kind, const DiscreteField& beta,
                               const DiscreteField& w, const FluxParams& params);

/// Random identity draws on an nx-by-nx periodic or walled unit-square mesh.
struct IdentitySweep {
  IdentityKind kind;
  int degree;
  int draws;
  double max_relative;
};
IdentitySweep run_identity_sweep(IdentityKind kind, int element_degree, int draws, int nx,
                                 std::uint64_t seed);

struct CoercivityReport {
  int draws = 0;
  double min_form = 0.0;       // min a_h(w, w) over the draws (normalized coefficients)
  double min_ratio = 0.0;      // min a_h(w, w) / |||w|||^2
  double min_gram_eigen = 0.0; // smallest eigenvalue of the |||.|||^2 Gram matrix
  double max_asymmetry = 0.0;  // max |A - A^T| / max |A|
};

/// Random-field study of the viscous form on an H(div) space with
/// eta = params.eta; the Gram check needs a mesh small enough for a dense
/// eigen-solve.
CoercivityReport coercivity_study(const FunctionSpace& V, StressVariant variant,
                                  const FluxParams& params, int draws, std::uint64_t seed);

struct ErrorReport {
  int k = 0;
  double h = 0.0;
  long dof = 0;
  double vel_l2 = 0.0;
  double pres_l2 = 0.0;
  double vel_order = 0.0;  // NaN on the coarsest row
  double pres_order = 0.0;
};

/// Fills the order columns of consecutive rows.
void fill_orders(std::vector<ErrorReport>& rows);

}  // namespace vns
