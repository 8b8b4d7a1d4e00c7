#include "vns/forms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "vns/errors.hpp"
#include "vns/parallel.hpp"

namespace vns {

const char* stress_variant_name(StressVariant v) {
  switch (v) {
    case StressVariant::FullDeviatoric: return "full-deviatoric";
    case StressVariant::SymmetricPair: return "symmetric-pair";
    case StressVariant::GradientOnly: return "gradient-only";
  }
  return "?";
}

Mat2 stress(StressVariant variant, const Mat2& g) {
  switch (variant) {
    case StressVariant::FullDeviatoric:
      return g + g.transpose() - (2.0 / 3.0) * g.trace() * Mat2::Identity();
    case StressVariant::SymmetricPair: return g + g.transpose();
    case StressVariant::GradientOnly: return g;
  }
  return g;
}

namespace {

using LocalKernel = std::function<void(std::size_t, DenseMatrix&)>;

void scatter(const DenseMatrix& local, std::span<const int> rows, std::span<const int> cols,
             std::vector<Triplet>& out) {
  for (Eigen::Index j = 0; j < local.cols(); ++j) {
    if (cols[j] < 0) continue;
    for (Eigen::Index i = 0; i < local.rows(); ++i) {
      if (rows[i] < 0) continue;
      out.emplace_back(rows[i], cols[j], local(i, j));
    }
  }
}

SparseMatrix from_chunks(int rows, int cols, std::vector<std::vector<Triplet>>& chunks) {
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  std::vector<Triplet> all;
  all.reserve(total);
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  SparseMatrix m(rows, cols);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return m;
}

/// Element loop; make_kernel is called once per chunk so kernels can own
/// scratch storage.
SparseMatrix assemble_cells(const FunctionSpace& rows, const FunctionSpace& cols,
                            const std::function<LocalKernel()>& make_kernel) {
  const std::size_t ne = rows.topology().num_elements();
  const int nchunks = assembly_threads();
  std::vector<std::vector<Triplet>> chunks(nchunks);
  parallel_chunks(ne, nchunks, [&](int c, std::size_t b, std::size_t e) {
    LocalKernel kernel = make_kernel();
    DenseMatrix local(rows.local_dim(), cols.local_dim());
    for (std::size_t k = b; k < e; ++k) {
      local.setZero();
      kernel(k, local);
      scatter(local, rows.element_dofs(k), cols.element_dofs(k), chunks[c]);
    }
  });
  return from_chunks(rows.num_dofs(), cols.num_dofs(), chunks);
}

/// Basis traces on both sides of a face at one parameter value, concatenated
/// plus then minus. Minus-side functions enter jumps with a negative sign.
struct FaceTrace {
  int n_plus = 0;
  int n = 0;
  std::vector<Vec2> val;
  std::vector<Mat2> grad;
  std::vector<double> div;
  std::vector<Vec2> jump;
  std::vector<Vec2> avg;

  void eval(const FunctionSpace& V, const Face& f, double t) {
    const int nl = V.local_dim();
    n_plus = nl;
    n = f.is_boundary() ? nl : 2 * nl;
    val.resize(n);
    grad.resize(n);
    div.resize(n);
    jump.resize(n);
    avg.resize(n);
    V.eval_vector(f.plus.element, face_point(f.plus, t), std::span<Vec2>(val.data(), nl),
                  std::span<Mat2>(grad.data(), nl), std::span<double>(div.data(), nl));
    if (!f.is_boundary())
      V.eval_vector(f.minus.element, face_point(f.minus, t), std::span<Vec2>(val.data() + nl, nl),
                    std::span<Mat2>(grad.data() + nl, nl), std::span<double>(div.data() + nl, nl));
    const double a = f.is_boundary() ? 1.0 : 0.5;
    for (int i = 0; i < n; ++i) {
      const bool plus = i < nl;
      jump[i] = plus ? val[i] : Vec2(-val[i]);
      avg[i] = a * val[i];
    }
  }
};

std::vector<int> face_dofs(const FunctionSpace& V, const Face& f) {
  std::vector<int> d;
  const auto p = V.element_dofs(f.plus.element);
  d.assign(p.begin(), p.end());
  if (!f.is_boundary()) {
    const auto m = V.element_dofs(f.minus.element);
    d.insert(d.end(), m.begin(), m.end());
  }
  return d;
}

using FaceKernel = std::function<void(int, double, double, const FaceTrace&, DenseMatrix&)>;

/// Face loop over the effective face set; the kernel accumulates one
/// quadrature point (face id, parameter, weight * length, traces).
SparseMatrix assemble_faces(const FunctionSpace& V, const std::function<FaceKernel()>& make_kernel) {
  const auto& faces = V.topology().faces.faces;
  const QuadratureRule rule = edge_rule(face_quadrature_degree(V.poly_degree()));
  const int nchunks = assembly_threads();
  std::vector<std::vector<Triplet>> chunks(nchunks);
  parallel_chunks(faces.size(), nchunks, [&](int c, std::size_t b, std::size_t e) {
    FaceKernel kernel = make_kernel();
    FaceTrace tr;
    DenseMatrix local;
    for (std::size_t fid = b; fid < e; ++fid) {
      const Face& f = faces[fid];
      const int n = f.is_boundary() ? V.local_dim() : 2 * V.local_dim();
      local.setZero(n, n);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double t = rule.points[q].x();
        tr.eval(V, f, t);
        kernel(static_cast<int>(fid), t, rule.weights[q] * f.length, tr, local);
      }
      const auto d = face_dofs(V, f);
      scatter(local, d, d, chunks[c]);
    }
  });
  return from_chunks(V.num_dofs(), V.num_dofs(), chunks);
}

void require_vector(const FunctionSpace& V, const char* what) {
  if (!V.is_vector()) throw ContractViolation(std::string(what) + " needs a vector space");
}

QuadratureRule volume_rule(const FunctionSpace& V) {
  return triangle_rule(volume_quadrature_degree(V.poly_degree()));
}

/// Values, gradients and divergences of a field at the points of a table.
struct FieldSamples {
  std::vector<Vec2> val;
  std::vector<Mat2> grad;
  std::vector<double> div;
};

void sample_field(const DiscreteField& u, const FunctionSpace& V, const VectorTable& tab,
                  const QuadratureRule& rule, std::size_t k, FieldSamples& out) {
  out.val.assign(tab.nq, Vec2::Zero());
  out.grad.assign(tab.nq, Mat2::Zero());
  out.div.assign(tab.nq, 0.0);
  if (u.space.get() == &V) {
    const auto dofs = V.element_dofs(k);
    for (int i = 0; i < tab.nb; ++i) {
      if (dofs[i] < 0) continue;
      const double c = u.coeffs(dofs[i]);
      if (c == 0.0) continue;
      for (int q = 0; q < tab.nq; ++q) {
        out.val[q] += c * tab.v(q, i);
        out.grad[q] += c * tab.g(q, i);
        out.div[q] += c * tab.d(q, i);
      }
    }
    return;
  }
  for (int q = 0; q < tab.nq; ++q)
    out.val[q] = u.vector_value(k, rule.points[q], &out.grad[q], &out.div[q]);
}

}  // namespace

SparseMatrix assemble_mass_matrix(const FunctionSpace& V) {
  require_vector(V, "mass matrix");
  const VolumeTabulator tabulator(V, volume_rule(V));
  return assemble_cells(V, V, [&]() -> LocalKernel {
    auto tab = std::make_shared<VectorTable>();
    return [&tabulator, tab](std::size_t k, DenseMatrix& local) {
      tabulator.tabulate(k, *tab);
      for (int q = 0; q < tab->nq; ++q)
        for (int j = 0; j < tab->nb; ++j)
          for (int i = 0; i < tab->nb; ++i)
            local(i, j) += tab->jxw[q] * tab->v(q, i).dot(tab->v(q, j));
    };
  });
}

SparseMatrix assemble_viscous_form(const FunctionSpace& V, StressVariant variant,
                                   const FluxParams& params, ViscousParts parts) {
  require_vector(V, "viscous form");
  SparseMatrix A(V.num_dofs(), V.num_dofs());
  if (parts != ViscousParts::FacesOnly) {
    const VolumeTabulator tabulator(V, volume_rule(V));
    A = assemble_cells(V, V, [&]() -> LocalKernel {
      auto tab = std::make_shared<VectorTable>();
      auto sig = std::make_shared<std::vector<Mat2>>();
      return [&tabulator, tab, sig, variant](std::size_t k, DenseMatrix& local) {
        tabulator.tabulate(k, *tab);
        sig->resize(tab->nb);
        for (int q = 0; q < tab->nq; ++q) {
          for (int j = 0; j < tab->nb; ++j) (*sig)[j] = stress(variant, tab->g(q, j));
          for (int j = 0; j < tab->nb; ++j)
            for (int i = 0; i < tab->nb; ++i)
              local(i, j) += tab->jxw[q] * (*sig)[j].cwiseProduct(tab->g(q, i)).sum();
        }
      };
    });
  }
  if (parts == ViscousParts::VolumeOnly || V.continuity() == Continuity::Continuous) return A;

  const auto& faces = V.topology().faces.faces;
  const double eta = params.eta;
  SparseMatrix F = assemble_faces(V, [&]() -> FaceKernel {
    auto sn = std::make_shared<std::vector<Vec2>>();
    return [&faces, sn, variant, eta](int fid, double, double wl, const FaceTrace& tr,
                                      DenseMatrix& local) {
      const Face& f = faces[fid];
      sn->resize(tr.n);
      const double a = f.is_boundary() ? 1.0 : 0.5;
      for (int i = 0; i < tr.n; ++i) (*sn)[i] = a * (stress(variant, tr.grad[i]) * f.normal);
      const double pen = eta / f.length;
      for (int j = 0; j < tr.n; ++j)
        for (int i = 0; i < tr.n; ++i)
          local(i, j) += wl * (-tr.jump[j].dot((*sn)[i]) - tr.jump[i].dot((*sn)[j]) +
                               pen * tr.jump[j].dot(tr.jump[i]));
    };
  });
  if (parts == ViscousParts::FacesOnly) return F;
  return A + F;
}

SparseMatrix assemble_pressure_divergence_form(const FunctionSpace& V, const FunctionSpace& Q) {
  require_vector(V, "pressure-divergence form");
  if (Q.is_vector()) throw ContractViolation("pressure-divergence form needs a scalar pressure space");
  const QuadratureRule rule = volume_rule(V);
  const VolumeTabulator tv(V, rule);
  const VolumeTabulator tq(Q, rule);
  return assemble_cells(Q, V, [&]() -> LocalKernel {
    auto a = std::make_shared<VectorTable>();
    auto b = std::make_shared<ScalarTable>();
    return [&tv, &tq, a, b](std::size_t k, DenseMatrix& local) {
      tv.tabulate(k, *a);
      tq.tabulate(k, *b);
      for (int q = 0; q < a->nq; ++q)
        for (int j = 0; j < a->nb; ++j) {
          const double dj = a->jxw[q] * a->d(q, j);
          for (int i = 0; i < b->nb; ++i) local(i, j) += dj * b->v(q, i);
        }
    };
  });
}

Vector assemble_pressure_mean(const FunctionSpace& Q) {
  if (Q.is_vector()) throw ContractViolation("pressure mean needs a scalar space");
  const VolumeTabulator tq(Q, triangle_rule(std::max(1, Q.poly_degree())));
  Vector m = Vector::Zero(Q.num_dofs());
  ScalarTable tab;
  for (std::size_t k = 0; k < Q.topology().num_elements(); ++k) {
    tq.tabulate(k, tab);
    const auto dofs = Q.element_dofs(k);
    for (int i = 0; i < tab.nb; ++i) {
      if (dofs[i] < 0) continue;
      double s = 0.0;
      for (int q = 0; q < tab.nq; ++q) s += tab.jxw[q] * tab.v(q, i);
      m(dofs[i]) += s;
    }
  }
  return m;
}

namespace {

void check_convective_field(const FunctionSpace& V, const DiscreteField& beta) {
  if (!beta.space || !beta.space->is_vector())
    throw ContractViolation("convective velocity must be a vector field");
  if (beta.space->continuity() == Continuity::Discontinuous)
    throw ContractViolation("convective velocity must be normal-continuous");
  if (&beta.space->topology() != &V.topology())
    throw ContractViolation("convective velocity lives on a different mesh");
}

int find_slot(const SparseMatrix& A, int row, int col) {
  const int* begin = A.innerIndexPtr() + A.outerIndexPtr()[col];
  const int* end = A.innerIndexPtr() + A.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(begin, end, row);
  return static_cast<int>(it - A.innerIndexPtr());
}

}  // namespace

struct ConvectionAssembler::Impl {
  const FunctionSpace* V = nullptr;
  QuadratureRule vrule;
  std::unique_ptr<VolumeTabulator> tabulator;
  SparseMatrix pattern;
  std::vector<int> cell_slots;  // [k * nb * nb + j * nb + i], -1 if constrained

  // Face traces at the edge quadrature points: rows 2q, 2q+1 hold the x and
  // y components, columns the plus then minus basis functions.
  struct FaceData {
    std::vector<int> dofs;
    std::vector<int> slots;  // [j * n + i]
    DenseMatrix jump;
    DenseMatrix avg;
    Vector wl;
    Vec2 normal;
  };
  std::vector<FaceData> faces;
  std::vector<Vec2> plus_points, minus_points;  // per face and q, reference coordinates
  int nqf = 0;

  // Computes each local matrix with `kernel(index, local) -> bool` and adds
  // it through `slots(index)`. Locals are added in index order whatever the
  // thread count.
  template <class Kernel, class Slots>
  void run(std::size_t count, Kernel&& kernel, Slots&& slots,
           double* values) const {
    const int nchunks =
        std::min<int>(assembly_threads(), static_cast<int>(std::max<std::size_t>(count, 1)));
    if (nchunks <= 1) {
      DenseMatrix local;
      for (std::size_t k = 0; k < count; ++k)
        if (kernel(k, local)) add(local, slots(k), values);
      return;
    }
    std::vector<std::vector<DenseMatrix>> buffers(nchunks);
    std::vector<std::vector<char>> used(nchunks);
    parallel_chunks(count, nchunks, [&](int c, std::size_t b, std::size_t e) {
      buffers[c].resize(e - b);
      used[c].assign(e - b, 0);
      for (std::size_t k = b; k < e; ++k) used[c][k - b] = kernel(k, buffers[c][k - b]);
    });
    for (int c = 0; c < nchunks; ++c) {
      const std::size_t b = count * c / nchunks;
      for (std::size_t k = 0; k < buffers[c].size(); ++k)
        if (used[c][k]) add(buffers[c][k], slots(b + k), values);
    }
  }

  static void add(const DenseMatrix& local, std::span<const int> slots, double* values) {
    const Eigen::Index n = local.rows();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const int s = slots[j * n + i];
        if (s >= 0) values[s] += local(i, j);
      }
  }

  std::span<const int> cell_slot_span(std::size_t k) const {
    const std::size_t nb2 = static_cast<std::size_t>(V->local_dim()) * V->local_dim();
    return {cell_slots.data() + k * nb2, nb2};
  }
};

ConvectionAssembler::ConvectionAssembler(const FunctionSpace& V) : impl_(std::make_unique<Impl>()) {
  require_vector(V, "convective form");
  Impl& m = *impl_;
  m.V = &V;
  m.vrule = volume_rule(V);
  m.tabulator = std::make_unique<VolumeTabulator>(V, m.vrule);
  const Topology& topo = V.topology();
  const std::size_t ne = topo.num_elements();
  const int nb = V.local_dim();
  const bool with_faces = V.continuity() != Continuity::Continuous;

  std::vector<Triplet> t;
  for (std::size_t k = 0; k < ne; ++k) {
    const auto d = V.element_dofs(k);
    for (int j : d)
      for (int i : d)
        if (i >= 0 && j >= 0) t.emplace_back(i, j, 0.0);
  }
  if (with_faces)
    for (const Face& f : topo.faces.faces) {
      const auto d = face_dofs(V, f);
      for (int j : d)
        for (int i : d)
          if (i >= 0 && j >= 0) t.emplace_back(i, j, 0.0);
    }
  m.pattern.resize(V.num_dofs(), V.num_dofs());
  m.pattern.setFromTriplets(t.begin(), t.end());
  m.pattern.makeCompressed();
  std::vector<Triplet>().swap(t);

  m.cell_slots.resize(ne * nb * nb);
  for (std::size_t k = 0; k < ne; ++k) {
    const auto d = V.element_dofs(k);
    int* s = m.cell_slots.data() + k * nb * nb;
    for (int j = 0; j < nb; ++j)
      for (int i = 0; i < nb; ++i)
        s[j * nb + i] = (d[i] >= 0 && d[j] >= 0) ? find_slot(m.pattern, d[i], d[j]) : -1;
  }
  if (!with_faces) return;

  const QuadratureRule rule = edge_rule(face_quadrature_degree(V.poly_degree()));
  const int nq = static_cast<int>(rule.size());
  m.nqf = nq;
  m.faces.resize(topo.faces.size());
  FaceTrace tr;
  for (std::size_t fid = 0; fid < topo.faces.size(); ++fid) {
    const Face& f = topo.faces.faces[fid];
    auto& fd = m.faces[fid];
    fd.dofs = face_dofs(V, f);
    const int n = static_cast<int>(fd.dofs.size());
    fd.slots.resize(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        fd.slots[j * n + i] =
            (fd.dofs[i] >= 0 && fd.dofs[j] >= 0) ? find_slot(m.pattern, fd.dofs[i], fd.dofs[j]) : -1;
    fd.jump.resize(2 * nq, n);
    fd.avg.resize(2 * nq, n);
    fd.wl.resize(nq);
    fd.normal = f.normal;
    for (int q = 0; q < nq; ++q) {
      const double tq = rule.points[q].x();
      tr.eval(V, f, tq);
      fd.wl(q) = rule.weights[q] * f.length;
      for (int i = 0; i < n; ++i) {
        fd.jump(2 * q, i) = tr.jump[i].x();
        fd.jump(2 * q + 1, i) = tr.jump[i].y();
        fd.avg(2 * q, i) = tr.avg[i].x();
        fd.avg(2 * q + 1, i) = tr.avg[i].y();
      }
      m.plus_points.push_back(face_point(f.plus, tq));
      m.minus_points.push_back(f.is_boundary() ? Vec2(Vec2::Zero()) : face_point(f.minus, tq));
    }
  }
}

ConvectionAssembler::~ConvectionAssembler() = default;
ConvectionAssembler::ConvectionAssembler(ConvectionAssembler&&) noexcept = default;
ConvectionAssembler& ConvectionAssembler::operator=(ConvectionAssembler&&) noexcept = default;

const SparseMatrix& ConvectionAssembler::pattern() const { return impl_->pattern; }

SparseMatrix ConvectionAssembler::convective(const DiscreteField& beta, double zeta) const {
  const Impl& m = *impl_;
  const FunctionSpace& V = *m.V;
  check_convective_field(V, beta);
  SparseMatrix C = m.pattern;
  double* values = C.valuePtr();
  const bool same = beta.space.get() == &V;
  const int nb = V.local_dim();

  m.run(
      V.topology().num_elements(),
      [&](std::size_t k, DenseMatrix& local) {
        thread_local VectorTable tab;
        thread_local FieldSamples bs;
        m.tabulator->tabulate(k, tab);
        sample_field(beta, V, tab, m.vrule, k, bs);
        const int nq = tab.nq;
        DenseMatrix vw(2 * nq, nb), cm(2 * nq, nb);
        for (int q = 0; q < nq; ++q) {
          const Vec2& b = bs.val[q];
          const double half_div = 0.5 * bs.div[q];
          for (int j = 0; j < nb; ++j) {
            const Vec2& v = tab.v(q, j);
            const Vec2 c = tab.g(q, j) * b + half_div * v;
            vw(2 * q, j) = tab.jxw[q] * v.x();
            vw(2 * q + 1, j) = tab.jxw[q] * v.y();
            cm(2 * q, j) = c.x();
            cm(2 * q + 1, j) = c.y();
          }
        }
        local.noalias() = vw.transpose() * cm;
        return true;
      },
      [&](std::size_t k) { return m.cell_slot_span(k); }, values);

  if (!m.faces.empty()) {
    const int nq = m.nqf;
    m.run(
        m.faces.size(),
        [&](std::size_t fid, DenseMatrix& local) {
          const auto& fd = m.faces[fid];
          const Face& f = V.topology().faces.faces[fid];
          Vector bn(nq);
          if (same) {
            Vector c(fd.dofs.size());
            for (std::size_t i = 0; i < fd.dofs.size(); ++i)
              c(i) = fd.dofs[i] >= 0 ? beta.coeffs(fd.dofs[i]) : 0.0;
            const Vector bv = fd.avg * c;
            for (int q = 0; q < nq; ++q)
              bn(q) = fd.normal.x() * bv(2 * q) + fd.normal.y() * bv(2 * q + 1);
          } else {
            for (int q = 0; q < nq; ++q) {
              const std::size_t at = fid * nq + q;
              double v = beta.vector_value(f.plus.element, m.plus_points[at]).dot(f.normal);
              if (!f.is_boundary())
                v = 0.5 * (v + beta.vector_value(f.minus.element, m.minus_points[at]).dot(f.normal));
              bn(q) = v;
            }
          }
          if (bn.isZero(0.0)) return false;
          Vector w1(2 * nq), w2(2 * nq);
          for (int q = 0; q < nq; ++q) {
            w1(2 * q) = w1(2 * q + 1) = -bn(q) * fd.wl(q);
            w2(2 * q) = w2(2 * q + 1) = zeta * std::abs(bn(q)) * fd.wl(q);
          }
          local.noalias() = fd.avg.transpose() * (w1.asDiagonal() * fd.jump);
          local.noalias() += fd.jump.transpose() * (w2.asDiagonal() * fd.jump);
          return true;
        },
        [&](std::size_t fid) { return std::span<const int>(m.faces[fid].slots); }, values);
  }
  return C;
}

SparseMatrix ConvectionAssembler::graddiv(const DiscreteField& u, double delta) const {
  const Impl& m = *impl_;
  const FunctionSpace& V = *m.V;
  if (!u.space || !u.space->is_vector())
    throw ContractViolation("stabilization weight must be a vector field");
  SparseMatrix S = m.pattern;
  if (delta == 0.0) return S;
  const int nb = V.local_dim();
  m.run(
      V.topology().num_elements(),
      [&](std::size_t k, DenseMatrix& local) {
        thread_local VectorTable tab;
        thread_local FieldSamples us;
        m.tabulator->tabulate(k, tab);
        sample_field(u, V, tab, m.vrule, k, us);
        DenseMatrix d(tab.nq, nb);
        Vector w(tab.nq);
        for (int q = 0; q < tab.nq; ++q) {
          w(q) = delta * tab.jxw[q] * us.val[q].norm();
          for (int j = 0; j < nb; ++j) d(q, j) = tab.d(q, j);
        }
        local.noalias() = d.transpose() * (w.asDiagonal() * d);
        return true;
      },
      [&](std::size_t k) { return m.cell_slot_span(k); }, S.valuePtr());
  return S;
}

SparseMatrix assemble_convective_form(const FunctionSpace& V, const DiscreteField& beta,
                                      double zeta) {
  require_vector(V, "convective form");
  check_convective_field(V, beta);
  return ConvectionAssembler(V).convective(beta, zeta);
}

SparseMatrix assemble_graddiv_stabilization(const FunctionSpace& V, const DiscreteField& u,
                                            double delta) {
  require_vector(V, "grad-div stabilization");
  return ConvectionAssembler(V).graddiv(u, delta);
}

SparseMatrix assemble_graddiv_linear(const FunctionSpace& V, double eps) {
  require_vector(V, "grad-div stabilization");
  const VolumeTabulator tabulator(V, volume_rule(V));
  return assemble_cells(V, V, [&]() -> LocalKernel {
    auto tab = std::make_shared<VectorTable>();
    return [&tabulator, tab, eps](std::size_t k, DenseMatrix& local) {
      tabulator.tabulate(k, *tab);
      for (int q = 0; q < tab->nq; ++q)
        for (int j = 0; j < tab->nb; ++j)
          for (int i = 0; i < tab->nb; ++i)
            local(i, j) += eps * tab->jxw[q] * tab->d(q, j) * tab->d(q, i);
    };
  });
}

Vector assemble_load_vector(const FunctionSpace& V, const TimeVectorFunction& f, double t) {
  require_vector(V, "load vector");
  const VolumeTabulator tabulator(V, volume_rule(V));
  Vector b = Vector::Zero(V.num_dofs());
  VectorTable tab;
  for (std::size_t k = 0; k < V.topology().num_elements(); ++k) {
    tabulator.tabulate(k, tab);
    const auto dofs = V.element_dofs(k);
    for (int q = 0; q < tab.nq; ++q) {
      const Vec2 fq = f(tab.x[q], t);
      if (fq.isZero(0.0)) continue;
      for (int i = 0; i < tab.nb; ++i)
        if (dofs[i] >= 0) b(dofs[i]) += tab.jxw[q] * fq.dot(tab.v(q, i));
    }
  }
  return b;
}

void write_matrix_coo(const SparseMatrix& A, std::ostream& out) {
  out << std::setprecision(17);
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace vns
