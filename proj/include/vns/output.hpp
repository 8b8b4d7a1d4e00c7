#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vns/analysis.hpp"
#include "vns/solver.hpp"

namespace vns {

/// Columns k,h,dof,vel_error,vel_order,pres_error,pres_order. Errors use
/// 3 significant digits, orders two decimals, NaN orders are left blank.
void write_error_table(const std::vector<ErrorReport>& rows, std::ostream& out);
void write_error_table(const std::vector<ErrorReport>& rows, const std::string& path);
std::vector<ErrorReport> read_error_table(std::istream& in);
std::vector<ErrorReport> read_error_table(const std::string& path);

/// Legacy VTK unstructured grid. Each element is split into r^2 sub-triangles
/// on its order-r lattice (r = 0 picks the local velocity degree); nodes are
/// not shared between elements, so discontinuous fields are kept as is.
/// Point data: velocity, pressure, velocity_magnitude. Cell data: vorticity
/// at the sub-triangle centroids.
void write_field_output(const DiscreteField& u, const DiscreteField& p, double t,
                        std::ostream& out, int r = 0);
void write_field_output(const DiscreteField& u, const DiscreteField& p, double t,
                        const std::string& path, int r = 0);

void write_diagnostics(const std::vector<StepDiagnostics>& steps, std::ostream& out);
void write_diagnostics(const std::vector<StepDiagnostics>& steps, const std::string& path);

}  // namespace vns
