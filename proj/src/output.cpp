#include "vns/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vns/errors.hpp"

namespace vns {

namespace {

std::string fmt(const char* f, double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& s, bool allow_blank) {
  if (s.empty()) {
    if (allow_blank) return std::numeric_limits<double>::quiet_NaN();
    throw IoError("empty value in error table");
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("bad number '" + s + "' in error table");
  }
  if (used != s.size()) throw IoError("bad number '" + s + "' in error table");
  return v;
}

const char* kHeader = "k,h,dof,vel_error,vel_order,pres_error,pres_order";

}  // namespace

void write_error_table(const std::vector<ErrorReport>& rows, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << fmt("%.4f", r.h) << ',' << r.dof << ',' << fmt("%.2e", r.vel_l2) << ','
        << (std::isnan(r.vel_order) ? "" : fmt("%.2f", r.vel_order)) << ','
        << fmt("%.2e", r.pres_l2) << ','
        << (std::isnan(r.pres_order) ? "" : fmt("%.2f", r.pres_order)) << '\n';
  }
}

void write_error_table(const std::vector<ErrorReport>& rows, const std::string& path) {
  auto out = open_out(path);
  write_error_table(rows, out);
  finish(out, path);
}

std::vector<ErrorReport> read_error_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw IoError("missing error table header");
  std::vector<ErrorReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 7) throw IoError("error table row needs 7 columns: '" + line + "'");
    ErrorReport r;
    r.k = static_cast<int>(parse_cell(c[0], false));
    r.h = parse_cell(c[1], false);
    r.dof = static_cast<long>(parse_cell(c[2], false));
    r.vel_l2 = parse_cell(c[3], false);
    r.vel_order = parse_cell(c[4], true);
    r.pres_l2 = parse_cell(c[5], false);
    r.pres_order = parse_cell(c[6], true);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ErrorReport> read_error_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return read_error_table(in);
}

void write_field_output(const DiscreteField& u, const DiscreteField& p, double t,
                        std::ostream& out, int r) {
  if (!u.space || !u.space->is_vector()) throw InvalidArgument("field output needs a velocity field");
  if (!p.space || p.space->is_vector()) throw InvalidArgument("field output needs a scalar pressure");
  const Topology& topo = u.space->topology();
  if (&p.space->topology() != &topo) throw InvalidArgument("velocity and pressure meshes differ");
  if (r <= 0) r = std::max(1, u.space->poly_degree());

  const auto lattice = reference_lattice(r);
  const int np = static_cast<int>(lattice.size());
  auto index = [r](int i, int j) { return j * (r + 1) - j * (j - 1) / 2 + i; };
  std::vector<std::array<int, 3>> sub;
  for (int j = 0; j < r; ++j)
    for (int i = 0; i + j < r; ++i) {
      sub.push_back({index(i, j), index(i + 1, j), index(i, j + 1)});
      if (i + j < r - 1) sub.push_back({index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)});
    }
  const std::size_t ne = topo.num_elements();
  const std::size_t npts = ne * np;
  const std::size_t ncells = ne * sub.size();

  out << "# vtk DataFile Version 3.0\n";
  out << "versatile-ns fields t=" << fmt("%.6f", t) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npts << " double\n";
  for (std::size_t k = 0; k < ne; ++k)
    for (const Vec2& xh : lattice) {
      const Vec2 x = topo.maps[k].to_physical(xh);
      out << fmt("%.10e", x.x()) << ' ' << fmt("%.10e", x.y()) << " 0\n";
    }
  out << "CELLS " << ncells << ' ' << 4 * ncells << '\n';
  for (std::size_t k = 0; k < ne; ++k)
    for (const auto& s : sub)
      out << "3 " << k * np + s[0] << ' ' << k * np + s[1] << ' ' << k * np + s[2] << '\n';
  out << "CELL_TYPES " << ncells << '\n';
  for (std::size_t c = 0; c < ncells; ++c) out << "5\n";

  std::vector<Vec2> vel(npts);
  std::vector<double> pres(npts);
  for (std::size_t k = 0; k < ne; ++k)
    for (int a = 0; a < np; ++a) {
      vel[k * np + a] = u.vector_value(k, lattice[a]);
      pres[k * np + a] = p.scalar_value(k, lattice[a]);
    }
  out << "POINT_DATA " << npts << '\n';
  out << "VECTORS velocity double\n";
  for (const Vec2& v : vel) out << fmt("%.10e", v.x()) << ' ' << fmt("%.10e", v.y()) << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double v : pres) out << fmt("%.10e", v) << '\n';
  out << "SCALARS velocity_magnitude double 1\nLOOKUP_TABLE default\n";
  for (const Vec2& v : vel) out << fmt("%.10e", v.norm()) << '\n';

  out << "CELL_DATA " << ncells << '\n';
  out << "SCALARS vorticity double 1\nLOOKUP_TABLE default\n";
  for (std::size_t k = 0; k < ne; ++k)
    for (const auto& s : sub) {
      const Vec2 xc = (lattice[s[0]] + lattice[s[1]] + lattice[s[2]]) / 3.0;
      Mat2 g;
      u.vector_value(k, xc, &g);
      out << fmt("%.10e", g(1, 0) - g(0, 1)) << '\n';
    }
}

void write_field_output(const DiscreteField& u, const DiscreteField& p, double t,
                        const std::string& path, int r) {
  auto out = open_out(path);
  write_field_output(u, p, t, out, r);
  finish(out, path);
}

void write_diagnostics(const std::vector<StepDiagnostics>& steps, std::ostream& out) {
  out << "step,t,bdf_order,kinetic_energy,max_divergence,picard_iterations\n";
  for (const auto& d : steps)
    out << d.step << ',' << fmt("%.6f", d.t) << ',' << d.bdf_order << ','
        << fmt("%.12e", d.kinetic_energy) << ',' << fmt("%.6e", d.max_divergence) << ','
        << d.picard_iterations << '\n';
}

void write_diagnostics(const std::vector<StepDiagnostics>& steps, const std::string& path) {
  auto out = open_out(path);
  write_diagnostics(steps, out);
  finish(out, path);
}

}  // namespace vns
