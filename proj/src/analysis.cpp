#include "vns/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vns/errors.hpp"

namespace vns {

int error_quadrature_degree(int p) { return std::min(3 * p + 4, kMaxQuadratureDegree); }

namespace {

struct FieldPoint {
  Vec2 x;
  double jxw;
  Vec2 val;
  Mat2 grad;
  double div;
};

/// fn(element, point) for every volume quadrature point, with the field
/// sampled through its own space's tabulation.
template <class Fn>
void for_each_vector_point(const DiscreteField& u, const QuadratureRule& rule, Fn&& fn) {
  const FunctionSpace& V = *u.space;
  const VolumeTabulator tabulator(V, rule);
  VectorTable tab;
  for (std::size_t k = 0; k < V.topology().num_elements(); ++k) {
    tabulator.tabulate(k, tab);
    const auto dofs = V.element_dofs(k);
    for (int q = 0; q < tab.nq; ++q) {
      FieldPoint p{tab.x[q], tab.jxw[q], Vec2::Zero(), Mat2::Zero(), 0.0};
      for (int i = 0; i < tab.nb; ++i) {
        if (dofs[i] < 0) continue;
        const double c = u.coeffs(dofs[i]);
        p.val += c * tab.v(q, i);
        p.grad += c * tab.g(q, i);
        p.div += c * tab.d(q, i);
      }
      fn(k, p);
    }
  }
}

struct FacePoint {
  const Face* face;
  double wl;   // weight * length
  Vec2 jump;
  Vec2 avg;
  Vec2 plus;
  Mat2 grad_plus;
  Mat2 grad_minus;
  Vec2 minus;
};

template <class Fn>
void for_each_face_point(const DiscreteField& u, int quad_degree, Fn&& fn) {
  const Topology& topo = u.space->topology();
  const QuadratureRule rule = edge_rule(quad_degree);
  for (const Face& f : topo.faces.faces) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double t = rule.points[q].x();
      FacePoint p{&f, rule.weights[q] * f.length, {}, {}, {}, Mat2::Zero(), Mat2::Zero(),
                  Vec2::Zero()};
      p.plus = u.vector_value(f.plus.element, face_point(f.plus, t), &p.grad_plus);
      if (f.is_boundary()) {
        p.jump = p.plus;
        p.avg = p.plus;
        p.grad_minus = p.grad_plus;
      } else {
        p.minus = u.vector_value(f.minus.element, face_point(f.minus, t), &p.grad_minus);
        p.jump = p.plus - p.minus;
        p.avg = 0.5 * (p.plus + p.minus);
      }
      fn(t, p);
    }
  }
}

double face_normal_flux(const DiscreteField& beta, const Face& f, double t) {
  double bn = beta.vector_value(f.plus.element, face_point(f.plus, t)).dot(f.normal);
  if (!f.is_boundary())
    bn = 0.5 * (bn + beta.vector_value(f.minus.element, face_point(f.minus, t)).dot(f.normal));
  return bn;
}

void require_vector_field(const DiscreteField& u, const char* what) {
  if (!u.space || !u.space->is_vector())
    throw ContractViolation(std::string(what) + " needs a vector field");
}

int field_face_degree(const DiscreteField& u) {
  return std::min(2 * u.space->poly_degree() + 2, kMaxQuadratureDegree);
}

double jump_sum(const DiscreteField& w) {
  double s = 0.0;
  for_each_face_point(w, field_face_degree(w), [&](double, const FacePoint& p) {
    s += p.wl / p.face->length * p.jump.squaredNorm();
  });
  return s;
}

}  // namespace

double sym_triple_norm(const DiscreteField& w, double jump_weight) {
  require_vector_field(w, "sym_triple_norm");
  double vol = 0.0;
  for_each_vector_point(w, triangle_rule(2 * w.space->poly_degree() + 2),
                        [&](std::size_t, const FieldPoint& p) {
                          vol += p.jxw * stress(StressVariant::FullDeviatoric, p.grad).squaredNorm();
                        });
  return std::sqrt(vol + jump_weight * jump_sum(w));
}

double jump_seminorm(const DiscreteField& w) {
  require_vector_field(w, "jump_seminorm");
  return std::sqrt(jump_sum(w));
}

double convective_seminorm(const DiscreteField& beta, const DiscreteField& w, double zeta) {
  require_vector_field(beta, "convective_seminorm");
  require_vector_field(w, "convective_seminorm");
  if (zeta == 0.0) return 0.0;
  double s = 0.0;
  const int deg = std::min(beta.space->poly_degree() + 2 * w.space->poly_degree() + 2,
                           kMaxQuadratureDegree);
  for_each_face_point(w, deg, [&](double t, const FacePoint& p) {
    s += p.wl * std::abs(face_normal_flux(beta, *p.face, t)) * p.jump.squaredNorm();
  });
  return std::sqrt(zeta * s);
}

double l2_error(const DiscreteField& fh, const TimeVectorFunction& exact, double t) {
  require_vector_field(fh, "l2_error");
  double s = 0.0;
  for_each_vector_point(fh, triangle_rule(error_quadrature_degree(fh.space->poly_degree())),
                        [&](std::size_t, const FieldPoint& p) {
                          s += p.jxw * (exact(p.x, t) - p.val).squaredNorm();
                        });
  return std::sqrt(s);
}

double l2_error(const DiscreteField& fh, const std::function<double(const Vec2&, double)>& exact,
                double t) {
  if (!fh.space || fh.space->is_vector()) throw ContractViolation("l2_error needs a scalar field");
  const FunctionSpace& Q = *fh.space;
  const VolumeTabulator tabulator(Q, triangle_rule(error_quadrature_degree(Q.poly_degree())));
  ScalarTable tab;
  const std::size_t ne = Q.topology().num_elements();
  std::vector<double> ex, ap, w;
  for (std::size_t k = 0; k < ne; ++k) {
    tabulator.tabulate(k, tab);
    const auto dofs = Q.element_dofs(k);
    for (int q = 0; q < tab.nq; ++q) {
      double v = 0.0;
      for (int i = 0; i < tab.nb; ++i)
        if (dofs[i] >= 0) v += fh.coeffs(dofs[i]) * tab.v(q, i);
      ex.push_back(exact(tab.x[q], t));
      ap.push_back(v);
      w.push_back(tab.jxw[q]);
    }
  }
  double mean = 0.0, area = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += w[i] * ex[i];
    area += w[i];
  }
  mean /= area;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::pow(ex[i] - mean - ap[i], 2);
  return std::sqrt(s);
}

std::vector<double> observed_order(const std::vector<std::pair<double, double>>& he) {
  for (const auto& [h, e] : he) {
    if (!(e > 0.0)) throw InvalidArgument("observed_order: errors must be positive");
    if (!(h > 0.0)) throw InvalidArgument("observed_order: mesh sizes must be positive");
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < he.size(); ++i) {
    if (!(he[i].first < he[i - 1].first))
      throw InvalidArgument("observed_order: mesh sizes must decrease strictly");
    rates.push_back(std::log(he[i - 1].second / he[i].second) /
                    std::log(he[i - 1].first / he[i].first));
  }
  return rates;
}

double kinetic_energy(const DiscreteField& u) {
  require_vector_field(u, "kinetic_energy");
  double s = 0.0;
  for_each_vector_point(u, triangle_rule(2 * u.space->poly_degree()),
                        [&](std::size_t, const FieldPoint& p) { s += p.jxw * p.val.squaredNorm(); });
  return 0.5 * s;
}

double max_cellwise_divergence(const DiscreteField& u) {
  require_vector_field(u, "max_cellwise_divergence");
  double m = 0.0;
  for_each_vector_point(u, triangle_rule(volume_quadrature_degree(u.space->poly_degree())),
                        [&](std::size_t, const FieldPoint& p) { m = std::max(m, std::abs(p.div)); });
  return m;
}

std::vector<Vec2> reference_lattice(int r) {
  if (r < 1) throw InvalidArgument("lattice order must be positive");
  std::vector<Vec2> pts;
  pts.reserve((r + 1) * (r + 2) / 2);
  for (int j = 0; j <= r; ++j)
    for (int i = 0; i + j <= r; ++i) pts.emplace_back(double(i) / r, double(j) / r);
  return pts;
}

double max_speed(const DiscreteField& u, int level) {
  require_vector_field(u, "max_speed");
  const int r = level > 0 ? level : std::max(2, u.space->poly_degree());
  const auto pts = reference_lattice(r);
  double m = 0.0;
  for (std::size_t k = 0; k < u.space->topology().num_elements(); ++k)
    for (const Vec2& xh : pts) m = std::max(m, u.vector_value(k, xh).norm());
  return m;
}

KernelSample eval_kernel_field(int dim, const std::vector<double>& k, const Eigen::VectorXd& x) {
  KernelSample s;
  if (dim == 2) {
    if (k.size() < 3 || x.size() != 2) throw InvalidArgument("2D kernel needs k1..k3 and a 2D point");
    s.value = Eigen::Vector2d(k[0] * x(1) + k[1], -k[0] * x(0) + k[2]);
    s.grad = Eigen::Matrix2d{{0.0, k[0]}, {-k[0], 0.0}};
  } else if (dim == 3) {
    if (k.size() < 10 || x.size() != 3)
      throw InvalidArgument("3D kernel needs k1..k10 and a 3D point");
    Eigen::Matrix3d S{{0.0, k[0], k[1]}, {-k[0], 0.0, k[2]}, {-k[1], -k[2], 0.0}};
    const Eigen::Vector3d c(k[3], k[4], k[5]);
    const Eigen::Vector3d m(k[7], k[8], k[9]);
    const Eigen::Vector3d p = x;
    const double s_lin = 2.0 * m.dot(p) + k[6];
    s.value = S * p + c - p.squaredNorm() * m + s_lin * p;
    s.grad = S - 2.0 * m * p.transpose() + 2.0 * p * m.transpose() +
             s_lin * Eigen::Matrix3d::Identity();
  } else {
    throw InvalidArgument("kernel dimension must be 2 or 3");
  }
  s.residual = s.grad + s.grad.transpose() -
               (2.0 / 3.0) * s.grad.trace() * Eigen::MatrixXd::Identity(dim, dim);
  return s;
}

double kernel_field_fd_residual(int dim, const std::vector<double>& k, const Eigen::VectorXd& x,
                                double step) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    g.col(j) = (eval_kernel_field(dim, k, xp).value - eval_kernel_field(dim, k, xm).value) /
               (2.0 * step);
  }
  const Eigen::MatrixXd r =
      g + g.transpose() - (2.0 / 3.0) * g.trace() * Eigen::MatrixXd::Identity(dim, dim);
  return r.cwiseAbs().maxCoeff();
}

const char* identity_name(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::JumpIdentity: return "jump_identity";
    case IdentityKind::SemiCoercivity: return "semi_coercivity";
    case IdentityKind::Decomposition: return "decomposition";
    case IdentityKind::Allaire: return "allaire";
    case IdentityKind::GradDivSign: return "graddiv_sign";
  }
  return "?";
}

namespace {

void require_hdiv_like(const DiscreteField& u, const char* what) {
  require_vector_field(u, what);
  if (u.space->continuity() == Continuity::Discontinuous)
    throw ContractViolation(std::string(what) + " needs a normal-continuous field");
}

double quadratic_scale(const SparseMatrix& A, const Vector& w) {
  double s = 0.0;
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it)
      s += std::abs(w(it.row()) * it.value() * w(it.col()));
  return s;
}

IdentityResult jump_identity(const DiscreteField& beta, const DiscreteField& w) {
  require_hdiv_like(beta, "jump identity");
  require_hdiv_like(w, "jump identity");
  const int pv = std::min(beta.space->poly_degree() + 2 * w.space->poly_degree() + 2,
                          kMaxQuadratureDegree);
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  {
    const QuadratureRule rule = triangle_rule(pv);
    const VolumeTabulator tb(*beta.space, rule);
    const VolumeTabulator tw(*w.space, rule);
    VectorTable a, b;
    for (std::size_t k = 0; k < w.space->topology().num_elements(); ++k) {
      tb.tabulate(k, a);
      tw.tabulate(k, b);
      const auto db = beta.space->element_dofs(k);
      const auto dw = w.space->element_dofs(k);
      for (int q = 0; q < a.nq; ++q) {
        Vec2 bv = Vec2::Zero(), wv = Vec2::Zero();
        double bd = 0.0;
        Mat2 wg = Mat2::Zero();
        for (int i = 0; i < a.nb; ++i)
          if (db[i] >= 0) {
            bv += beta.coeffs(db[i]) * a.v(q, i);
            bd += beta.coeffs(db[i]) * a.d(q, i);
          }
        for (int i = 0; i < b.nb; ++i)
          if (dw[i] >= 0) {
            wv += w.coeffs(dw[i]) * b.v(q, i);
            wg += w.coeffs(dw[i]) * b.g(q, i);
          }
        t1 += a.jxw[q] * (wg * bv).dot(wv);
        t2 += a.jxw[q] * 0.5 * bd * wv.squaredNorm();
      }
    }
  }
  for_each_face_point(w, pv, [&](double t, const FacePoint& p) {
    t3 -= p.wl * face_normal_flux(beta, *p.face, t) * p.jump.dot(p.avg);
  });
  return {std::abs(t1 + t2 + t3), std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

IdentityResult semi_coercivity(const DiscreteField& beta, const DiscreteField& w, double zeta) {
  require_hdiv_like(beta, "semi-coercivity");
  require_vector_field(w, "semi-coercivity");
  const SparseMatrix C = assemble_convective_form(*w.space, beta, zeta);
  const double lhs = w.coeffs.dot(C * w.coeffs);
  const double sn = convective_seminorm(beta, w, zeta);
  return {std::abs(lhs - sn * sn), quadratic_scale(C, w.coeffs)};
}

IdentityResult decomposition(const DiscreteField& w, const FluxParams& params) {
  require_vector_field(w, "decomposition");
  const SparseMatrix A = assemble_viscous_form(*w.space, StressVariant::FullDeviatoric, params);
  const double lhs = w.coeffs.dot(A * w.coeffs);
  double dev = 0.0, dil = 0.0;
  for_each_vector_point(w, triangle_rule(2 * w.space->poly_degree() + 2),
                        [&](std::size_t, const FieldPoint& p) {
                          dev += p.jxw * stress(StressVariant::FullDeviatoric, p.grad).squaredNorm();
                          dil += p.jxw * p.div * p.div;
                        });
  double cons = 0.0, pen = 0.0;
  if (w.space->continuity() != Continuity::Continuous) {
    for_each_face_point(w, field_face_degree(w), [&](double, const FacePoint& p) {
      const Face& f = *p.face;
      const Mat2 sp = stress(StressVariant::FullDeviatoric, p.grad_plus);
      const Mat2 sm = stress(StressVariant::FullDeviatoric, p.grad_minus);
      const Vec2 avg_sn = f.is_boundary() ? Vec2(sp * f.normal) : Vec2(0.5 * (sp + sm) * f.normal);
      cons += p.wl * p.jump.dot(avg_sn);
      pen += p.wl / f.length * p.jump.squaredNorm();
    });
  }
  const double t1 = 0.5 * dev, t2 = 2.0 * (3 - 2) / 9.0 * dil, t3 = -2.0 * cons,
               t4 = params.eta * pen;
  return {std::abs(lhs - (t1 + t2 + t3 + t4)),
          std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)};
}

IdentityResult allaire(const DiscreteField& w) {
  require_vector_field(w, "Allaire identity");
  if (w.space->family() != SpaceFamily::THVelocity || !w.space->options().zero_boundary)
    throw ContractViolation("Allaire identity needs a zero-boundary continuous velocity field");
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for_each_vector_point(w, triangle_rule(2 * w.space->poly_degree()),
                        [&](std::size_t, const FieldPoint& p) {
                          lhs += p.jxw * p.grad.transpose().cwiseProduct(p.grad).sum();
                          rhs += p.jxw * p.div * p.div;
                          scale += p.jxw * p.grad.squaredNorm();
                        });
  return {std::abs(lhs - rhs), scale};
}

IdentityResult graddiv_sign(const FunctionSpace& V, const FluxParams& params) {
  const SparseMatrix full =
      assemble_viscous_form(V, StressVariant::FullDeviatoric, params, ViscousParts::VolumeOnly);
  const SparseMatrix pair =
      assemble_viscous_form(V, StressVariant::SymmetricPair, params, ViscousParts::VolumeOnly);
  const SparseMatrix D = assemble_graddiv_linear(V, 1.0);
  const SparseMatrix R = full - pair + (2.0 / 3.0) * D;
  double res = 0.0, scale = 0.0;
  for (int j = 0; j < R.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(R, j); it; ++it) res = std::max(res, std::abs(it.value()));
  for (int j = 0; j < full.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(full, j); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  return {res, scale};
}

}  // namespace

IdentityResult verify_identity(IdentityKind kind, const DiscreteField& beta,
                               const DiscreteField& w, const FluxParams& params) {
  switch (kind) {
    case IdentityKind::JumpIdentity: return jump_identity(beta, w);
    case IdentityKind::SemiCoercivity: return semi_coercivity(beta, w, params.zeta);
    case IdentityKind::Decomposition: return decomposition(w, params);
    case IdentityKind::Allaire: return allaire(w);
    case IdentityKind::GradDivSign:
      require_vector_field(w, "grad-div sign check");
      return graddiv_sign(*w.space, params);
  }
  throw InvalidArgument("unknown identity");
}

namespace {

DiscreteField random_field(SpacePtr V, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector c(V->num_dofs());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = u(rng);
  return DiscreteField(std::move(V), std::move(c));
}

}  // namespace

IdentitySweep run_identity_sweep(IdentityKind kind, int element_degree, int draws, int nx,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Rectangle unit{0.0, 0.0, 1.0, 1.0};
  const bool periodic = kind == IdentityKind::JumpIdentity || kind == IdentityKind::SemiCoercivity;
  auto topo = make_topology(build_structured_triangle_mesh(nx, nx, unit), periodic, periodic);
  SpacePtr V;
  if (kind == IdentityKind::Allaire)
    V = build_function_space(topo, SpaceFamily::THVelocity, element_degree, {true});
  else
    V = build_function_space(topo, SpaceFamily::BDM, element_degree);
  FluxParams params;
  params.zeta = 0.5;
  params.eta = default_eta(element_degree);
  IdentitySweep out{kind, element_degree, kind == IdentityKind::GradDivSign ? 1 : draws, 0.0};
  for (int d = 0; d < out.draws; ++d) {
    const DiscreteField beta = random_field(V, rng);
    const DiscreteField w = random_field(V, rng);
    out.max_relative = std::max(out.max_relative, verify_identity(kind, beta, w, params).relative());
  }
  return out;
}

CoercivityReport coercivity_study(const FunctionSpace& V, StressVariant variant,
                                  const FluxParams& params, int draws, std::uint64_t seed) {
  if (!V.is_vector()) throw ContractViolation("coercivity study needs a vector space");
  auto Vp = std::shared_ptr<const FunctionSpace>(std::shared_ptr<const FunctionSpace>{}, &V);
  const SparseMatrix A = assemble_viscous_form(V, variant, params);
  CoercivityReport r;
  r.draws = draws;
  {
    const SparseMatrix At = A.transpose();
    const SparseMatrix diff = A - At;
    double dmax = 0.0, amax = 0.0;
    for (int j = 0; j < diff.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(diff, j); it; ++it)
        dmax = std::max(dmax, std::abs(it.value()));
    for (int j = 0; j < A.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(A, j); it; ++it) amax = std::max(amax, std::abs(it.value()));
    r.max_asymmetry = amax > 0.0 ? dmax / amax : 0.0;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  r.min_form = std::numeric_limits<double>::infinity();
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (int d = 0; d < draws; ++d) {
    Vector c(V.num_dofs());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = nd(rng);
    c /= c.norm();
    const DiscreteField w(Vp, c);
    const double a = c.dot(A * c);
    const double n = sym_triple_norm(w, 1.0);
    r.min_form = std::min(r.min_form, a);
    r.min_ratio = std::min(r.min_ratio, a / (n * n));
  }

  // Dense Gram matrix of |||.|||^2 through the polarization of single basis vectors.
  const int n = V.num_dofs();
  DenseMatrix G = DenseMatrix::Zero(n, n);
  const QuadratureRule rule = triangle_rule(2 * V.poly_degree() + 2);
  const VolumeTabulator tab(V, rule);
  VectorTable t;
  for (std::size_t k = 0; k < V.topology().num_elements(); ++k) {
    tab.tabulate(k, t);
    const auto dofs = V.element_dofs(k);
    for (int q = 0; q < t.nq; ++q)
      for (int i = 0; i < t.nb; ++i) {
        if (dofs[i] < 0) continue;
        const Mat2 si = stress(StressVariant::FullDeviatoric, t.g(q, i));
        for (int j = 0; j < t.nb; ++j) {
          if (dofs[j] < 0) continue;
          G(dofs[i], dofs[j]) +=
              t.jxw[q] * si.cwiseProduct(stress(StressVariant::FullDeviatoric, t.g(q, j))).sum();
        }
      }
  }
  const QuadratureRule er = edge_rule(2 * V.poly_degree() + 2);
  const int nl = V.local_dim();
  std::vector<Vec2> vals(2 * nl);
  for (const Face& f : V.topology().faces.faces) {
    std::vector<int> dofs;
    const auto dp = V.element_dofs(f.plus.element);
    dofs.assign(dp.begin(), dp.end());
    if (!f.is_boundary()) {
      const auto dm = V.element_dofs(f.minus.element);
      dofs.insert(dofs.end(), dm.begin(), dm.end());
    }
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double s = er.points[q].x();
      V.eval_vector(f.plus.element, face_point(f.plus, s), std::span<Vec2>(vals.data(), nl), {}, {});
      if (!f.is_boundary()) {
        V.eval_vector(f.minus.element, face_point(f.minus, s),
                      std::span<Vec2>(vals.data() + nl, nl), {}, {});
        for (int i = nl; i < 2 * nl; ++i) vals[i] = -vals[i];
      }
      const double w = er.weights[q];  // length / h_F = 1
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        if (dofs[i] < 0) continue;
        for (std::size_t j = 0; j < dofs.size(); ++j)
          if (dofs[j] >= 0) G(dofs[i], dofs[j]) += w * vals[i].dot(vals[j]);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(G, Eigen::EigenvaluesOnly);
  r.min_gram_eigen = es.eigenvalues()(0);
  return r;
}

void fill_orders(std::vector<ErrorReport>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].vel_order = rows[i].pres_order = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double lh = std::log(rows[i - 1].h / rows[i].h);
    rows[i].vel_order = std::log(rows[i - 1].vel_l2 / rows[i].vel_l2) / lh;
    rows[i].pres_order = std::log(rows[i - 1].pres_l2 / rows[i].pres_l2) / lh;
  }
}

}  // namespace vns
