#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vns/analysis.hpp"
#include "vns/cases.hpp"
#include "vns/config.hpp"
#include "vns/errors.hpp"
#include "vns/forms.hpp"
#include "vns/output.hpp"
#include "vns/verify.hpp"

namespace py = pybind11;
using namespace vns;

namespace {

SpaceFamily family_from(const std::string& s) {
  if (s == "TH-velocity") return SpaceFamily::THVelocity;
  if (s == "TH-pressure") return SpaceFamily::THPressure;
  if (s == "DC-pressure") return SpaceFamily::DCPressure;
  if (s == "BDM") return SpaceFamily::BDM;
  if (s == "RT") return SpaceFamily::RT;
  throw InvalidArgument("unknown space family '" + s + "'");
}

StressVariant variant_from(const std::string& s) {
  if (s == "full_deviatoric") return StressVariant::FullDeviatoric;
  if (s == "symmetric_pair") return StressVariant::SymmetricPair;
  if (s == "gradient_only") return StressVariant::GradientOnly;
  throw InvalidArgument("unknown stress variant '" + s + "'");
}

CaseConfig config_from(const std::string& json_text) {
  return parse_config(nlohmann::json::parse(json_text.empty() ? "{}" : json_text));
}

py::dict diagnostics_dict(const std::vector<StepDiagnostics>& steps) {
  std::vector<int> step, order, picard;
  std::vector<double> t, ke, div;
  for (const auto& d : steps) {
    step.push_back(d.step);
    t.push_back(d.t);
    order.push_back(d.bdf_order);
    ke.push_back(d.kinetic_energy);
    div.push_back(d.max_divergence);
    picard.push_back(d.picard_iterations);
  }
  py::dict out;
  out["step"] = step;
  out["t"] = t;
  out["bdf_order"] = order;
  out["kinetic_energy"] = ke;
  out["max_divergence"] = div;
  out["picard_iterations"] = picard;
  return out;
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["k"] = r.k;
  d["h"] = r.h;
  d["dof"] = r.dof;
  d["vel_error"] = r.vel_l2;
  d["vel_order"] = r.vel_order;
  d["pres_error"] = r.pres_l2;
  d["pres_order"] = r.pres_order;
  return d;
}

ErrorReport report_from(const py::dict& d) {
  ErrorReport r;
  r.k = d["k"].cast<int>();
  r.h = d["h"].cast<double>();
  r.dof = d["dof"].cast<long>();
  r.vel_l2 = d["vel_error"].cast<double>();
  r.pres_l2 = d["pres_error"].cast<double>();
  r.vel_order = d.contains("vel_order") ? d["vel_order"].cast<double>() : NAN;
  r.pres_order = d.contains("pres_order") ? d["pres_order"].cast<double>() : NAN;
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "H(div)-conforming and Taylor-Hood Navier-Stokes solver";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NonlinearDivergence>(m, "NonlinearDivergence", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Topology, std::shared_ptr<Topology>>(m, "Topology")
      .def_property_readonly("num_elements", &Topology::num_elements)
      .def_property_readonly("num_vertices", [](const Topology& t) { return t.mesh.num_vertices(); })
      .def_property_readonly("num_faces", [](const Topology& t) { return t.faces.size(); })
      .def_property_readonly("num_boundary_faces", [](const Topology& t) { return t.faces.boundary_ids.size(); })
      .def_property_readonly("h", [](const Topology& t) { return t.mesh.max_edge_length(); })
      .def_property_readonly("vertices", [](const Topology& t) {
        Eigen::MatrixXd v(t.mesh.num_vertices(), 2);
        for (std::size_t i = 0; i < t.mesh.num_vertices(); ++i) v.row(i) = t.mesh.vertices[i].transpose();
        return v;
      })
      .def_property_readonly("triangles", [](const Topology& t) {
        Eigen::MatrixXi tri(t.mesh.num_triangles(), 3);
        for (std::size_t i = 0; i < t.mesh.num_triangles(); ++i)
          for (int j = 0; j < 3; ++j) tri(i, j) = t.mesh.triangles[i][j];
        return tri;
      });

  m.def(
      "structured_mesh",
      [](int nx, int ny, std::array<double, 4> rect, bool periodic_x, bool periodic_y) {
        auto topo = make_topology(build_structured_triangle_mesh(nx, ny, {rect[0], rect[1], rect[2], rect[3]}),
                                  periodic_x, periodic_y);
        return std::const_pointer_cast<Topology>(topo);
      },
      py::arg("nx"), py::arg("ny"), py::arg("rect") = std::array<double, 4>{0, 0, 1, 1},
      py::arg("periodic_x") = false, py::arg("periodic_y") = false,
      "Structured triangulation of rect = (x_min, y_min, x_max, y_max).");

  py::class_<FunctionSpace, std::shared_ptr<FunctionSpace>>(m, "FunctionSpace")
      .def_property_readonly("num_dofs", &FunctionSpace::num_dofs)
      .def_property_readonly("degree", &FunctionSpace::degree)
      .def_property_readonly("family", [](const FunctionSpace& V) { return space_family_name(V.family()); })
      .def_property_readonly("is_vector", &FunctionSpace::is_vector)
      .def("__repr__", &FunctionSpace::describe);

  m.def(
      "function_space",
      [](std::shared_ptr<Topology> topo, const std::string& family, int degree, bool zero_boundary) {
        auto V = build_function_space(topo, family_from(family), degree, {.zero_boundary = zero_boundary});
        return std::const_pointer_cast<FunctionSpace>(V);
      },
      py::arg("topology"), py::arg("family"), py::arg("degree"), py::arg("zero_boundary") = false,
      "family is one of TH-velocity, TH-pressure, DC-pressure, BDM, RT.");

  py::class_<DiscreteField>(m, "DiscreteField")
      .def(py::init([](std::shared_ptr<FunctionSpace> V) { return DiscreteField(V); }))
      .def(py::init([](std::shared_ptr<FunctionSpace> V, const Vector& c) { return DiscreteField(V, c); }))
      .def_readwrite("coeffs", &DiscreteField::coeffs)
      .def("__call__", [](const DiscreteField& f, double x, double y) -> py::object {
        if (f.space->is_vector()) return py::cast(Eigen::Vector2d(evaluate_vector_field(f, {x, y})));
        return py::cast(evaluate_scalar_field(f, {x, y}));
      });

  m.def(
      "interpolate",
      [](std::shared_ptr<FunctionSpace> V, const std::function<py::object(double, double)>& f) {
        if (V->is_vector())
          return interpolate_field(V, VectorFunction([&](const Vec2& x) {
                                     auto v = f(x.x(), x.y()).cast<std::array<double, 2>>();
                                     return Vec2(v[0], v[1]);
                                   }));
        return interpolate_field(V, ScalarFunction([&](const Vec2& x) { return f(x.x(), x.y()).cast<double>(); }));
      },
      py::arg("space"), py::arg("f"), "Canonical interpolant of f(x, y).");

  m.def("mass_matrix", [](const FunctionSpace& V) { return assemble_mass_matrix(V); });
  m.def(
      "viscous_matrix",
      [](const FunctionSpace& V, const std::string& variant, double eta) {
        FluxParams p;
        p.eta = eta;
        return assemble_viscous_form(V, variant_from(variant), p);
      },
      py::arg("space"), py::arg("variant") = "full_deviatoric", py::arg("eta") = 18.0);
  m.def("divergence_matrix", [](const FunctionSpace& V, const FunctionSpace& Q) {
    return assemble_pressure_divergence_form(V, Q);
  });
  m.def("convection_matrix", [](const FunctionSpace& V, const DiscreteField& beta, double zeta) {
    return assemble_convective_form(V, beta, zeta);
  }, py::arg("space"), py::arg("beta"), py::arg("zeta") = 0.5);

  m.def("kinetic_energy", &kinetic_energy);
  m.def("max_cellwise_divergence", &max_cellwise_divergence);
  m.def("jump_seminorm", &jump_seminorm);
  m.def("sym_triple_norm", &sym_triple_norm, py::arg("w"), py::arg("jump_weight") = 1.0);
  m.def("observed_order", &observed_order, py::arg("h_and_error"));
  m.def("eval_kernel_field", [](int dim, const std::vector<double>& k, const Eigen::VectorXd& x) {
    auto s = eval_kernel_field(dim, k, x);
    return py::make_tuple(s.value, s.residual);
  });

  m.def("default_eta", &default_eta);
  m.def("normalize_config", [](const std::string& text) { return config_from(text).to_json().dump(); },
        "Validated config with defaults applied, as JSON text.");

  m.def(
      "run_case",
      [](const std::string& text) {
        const CaseConfig cfg = config_from(text);
        CaseResult res;
        {
          py::gil_scoped_release release;
          res = run_case(setup_case(cfg));
        }
        py::dict out;
        out["h"] = res.h;
        out["dof"] = res.dof;
        out["vel_error"] = res.vel_error;
        out["pres_error"] = res.pres_error;
        out["max_speed"] = res.max_speed;
        out["t"] = res.run.t;
        out["velocity"] = res.run.u;
        out["pressure"] = res.run.p;
        out["diagnostics"] = diagnostics_dict(res.run.steps);
        return out;
      },
      py::arg("config_json"));

  m.def(
      "run_convergence",
      [](const std::string& text) {
        const CaseConfig cfg = config_from(text);
        std::vector<ErrorReport> rows;
        {
          py::gil_scoped_release release;
          rows = run_convergence(cfg);
        }
        py::list out;
        for (const auto& r : rows) out.append(report_dict(r));
        return out;
      },
      py::arg("config_json"));

  m.def("verify", []() {
    std::vector<CheckResult> checks;
    {
      py::gil_scoped_release release;
      checks = run_verification_suite();
    }
    py::list out;
    for (const auto& c : checks) {
      py::dict d;
      d["group"] = c.group;
      d["name"] = c.name;
      d["passed"] = c.passed;
      d["value"] = c.value;
      d["tolerance"] = c.tolerance;
      d["detail"] = c.detail;
      out.append(d);
    }
    return out;
  });

  m.def("format_error_table", [](const std::vector<py::dict>& rows) {
    std::vector<ErrorReport> r;
    for (const auto& d : rows) r.push_back(report_from(d));
    std::ostringstream os;
    write_error_table(r, os);
    return os.str();
  });
  m.def("write_field_output",
        [](const DiscreteField& u, const DiscreteField& p, double t, const std::string& path) {
          write_field_output(u, p, t, path);
        },
        py::arg("u"), py::arg("p"), py::arg("t"), py::arg("path"));
}
