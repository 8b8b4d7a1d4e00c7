#pragma once

#include <functional>
#include <iosfwd>
#include <memory>

#include "vns/space.hpp"
#include "vns/types.hpp"

namespace vns {

enum class StressVariant {
  FullDeviatoric,  // grad u + grad u^T - (2/3)(div u) I
  SymmetricPair,   // grad u + grad u^T
  GradientOnly,    // grad u
};

const char* stress_variant_name(StressVariant v);

Mat2 stress(StressVariant variant, const Mat2& grad);

struct FluxParams {
  double zeta = 0.5;
  double eta = 18.0;
  double nu = 0.01;
  double delta = 0.0;
};

/// Penalty 3(k+1)(k+2) for table degree k.
inline double default_eta(int k) { return 3.0 * (k + 1) * (k + 2); }

enum class ViscousParts { All, VolumeOnly, FacesOnly };

/// Quadrature degrees used by every assembler for a space of local
/// polynomial degree p.
inline int volume_quadrature_degree(int p) { return 3 * p + 2; }
inline int face_quadrature_degree(int p) { return 3 * p + 2; }

SparseMatrix assemble_mass_matrix(const FunctionSpace& V);

/// Viscous form without the factor nu. Face terms are only assembled for
/// spaces that are not fully continuous.
SparseMatrix assemble_viscous_form(const FunctionSpace& V, StressVariant variant,
                                   const FluxParams& params,
                                   ViscousParts parts = ViscousParts::All);

/// B(i, j) = (div phi_j, q_i): rows are pressure dofs, columns velocity dofs.
SparseMatrix assemble_pressure_divergence_form(const FunctionSpace& V, const FunctionSpace& Q);

/// m_i = integral of q_i.
Vector assemble_pressure_mean(const FunctionSpace& Q);

/// C(beta)(i, j) = c_h(beta; phi_j, phi_i).
SparseMatrix assemble_convective_form(const FunctionSpace& V, const DiscreteField& beta,
                                      double zeta);

/// Assembler for the operators that change with the Picard iterate. The
/// sparsity pattern (cell and face couplings), scatter indices and face traces
/// are computed once; every call returns a matrix on that same pattern. The
/// space must outlive the assembler.
class ConvectionAssembler {
 public:
  explicit ConvectionAssembler(const FunctionSpace& V);
  ~ConvectionAssembler();
  ConvectionAssembler(ConvectionAssembler&&) noexcept;
  ConvectionAssembler& operator=(ConvectionAssembler&&) noexcept;

  SparseMatrix convective(const DiscreteField& beta, double zeta) const;
  SparseMatrix graddiv(const DiscreteField& u, double delta) const;
  /// All stored entries zero.
  const SparseMatrix& pattern() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// delta (|u| div phi_j, div phi_i).
SparseMatrix assemble_graddiv_stabilization(const FunctionSpace& V, const DiscreteField& u,
                                            double delta);
/// eps (div phi_j, div phi_i).
SparseMatrix assemble_graddiv_linear(const FunctionSpace& V, double eps);

using TimeVectorFunction = std::function<Vec2(const Vec2&, double)>;
Vector assemble_load_vector(const FunctionSpace& V, const TimeVectorFunction& f, double t);

/// "row col value" lines, one per stored entry, column-major order.
void write_matrix_coo(const SparseMatrix& A, std::ostream& out);

}  // namespace vns
