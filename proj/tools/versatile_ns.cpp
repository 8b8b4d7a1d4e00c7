#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vns/cases.hpp"
#include "vns/config.hpp"
#include "vns/errors.hpp"
#include "vns/output.hpp"
#include "vns/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Command-line values that override the config file; unset ones stay out of the JSON.
struct Overrides {
  std::string case_name, formulation, out_dir;
  int k = 0, nx = 0, ny = 0, bdf_order = 0;
  double nu = NAN, zeta = NAN, eta = NAN, delta = NAN, dt = NAN, t_end = NAN;
  std::vector<int> nx_list;
  bool no_fields = false;

  void add(CLI::App* app) {
    app->add_option("--case", case_name, "taylor_green or gresho");
    app->add_option("--formulation", formulation,
                    "TH-Symmetric, TH-NonSymmetric, BDM-Symmetric, BDM-NonSymmetric, RT-Symmetric");
    app->add_option("--k", k, "degree (1, 2 or 3)");
    app->add_option("--nx", nx, "cells in x");
    app->add_option("--ny", ny, "cells in y (defaults to nx)");
    app->add_option("--nu", nu, "viscosity");
    app->add_option("--zeta", zeta, "upwind weight in [0, 1]; 0 is the central flux");
    app->add_option("--eta", eta, "interior penalty (default 3(k+1)(k+2))");
    app->add_option("--delta", delta, "nonlinear grad-div weight");
    app->add_option("--dt", dt, "time step");
    app->add_option("--t-end", t_end, "final time");
    app->add_option("--bdf-order", bdf_order, "highest BDF order (1-3)");
    app->add_option("--out-dir", out_dir, "output directory");
    app->add_flag("--no-fields", no_fields, "skip VTK output");
  }

  json to_json() const {
    json j = json::object();
    if (!case_name.empty()) j["case"] = case_name;
    if (!formulation.empty()) j["formulation"] = formulation;
    if (k) j["k"] = k;
    if (nx) j["nx"] = nx;
    if (ny) j["ny"] = ny;
    if (!std::isnan(nu)) j["nu"] = nu;
    if (!std::isnan(zeta)) j["zeta"] = zeta;
    if (!std::isnan(eta)) j["eta"] = eta;
    if (!std::isnan(delta)) j["delta"] = delta;
    if (!std::isnan(dt)) j["dt"] = dt;
    if (!std::isnan(t_end)) j["t_end"] = t_end;
    if (bdf_order) j["bdf_order"] = bdf_order;
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    if (!nx_list.empty()) j["nx_list"] = nx_list;
    if (no_fields) j["outputs"] = {{"write_fields", false}};
    return j;
  }
};

std::string in_dir(const vns::CaseConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

std::string snapshot_name(const vns::CaseConfig& c, double t) {
  fs::path p(c.field_file);
  char buf[32];
  std::snprintf(buf, sizeof buf, "_t%.4f", t);
  return (fs::path(c.out_dir) / (p.stem().string() + buf + p.extension().string())).string();
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  const vns::CaseConfig cfg = vns::load_config(config_path, ov.to_json());
  fs::create_directories(cfg.out_dir);
  const vns::CaseSetup setup = vns::setup_case(cfg);
  std::printf("%s %s k=%d nx=%d ny=%d dof=%ld nu=%g zeta=%g eta=%g delta=%g dt=%g t_end=%g\n",
              vns::case_name(cfg.case_kind), vns::formulation_name(cfg.formulation), cfg.k, cfg.nx,
              cfg.ny, setup.dof(), cfg.nu, cfg.zeta, cfg.eta, cfg.delta, cfg.dt, cfg.t_end);

  const int nsteps = setup.scheme.num_steps();
  const int every = std::max(1, nsteps / 10);
  // last accepted state, written out if the nonlinear iteration gives up
  std::vector<vns::StepDiagnostics> steps;
  vns::DiscreteField last_u, last_p;
  double last_t = 0.0;
  auto observer = [&](const vns::StepDiagnostics& d, const vns::DiscreteField& u,
                      const vns::DiscreteField& p) {
    steps.push_back(d);
    last_u = u;
    last_p = p;
    last_t = d.t;
    if (cfg.write_fields)
      for (double ts : cfg.field_times)
        if (std::abs(d.t - ts) < 0.5 * cfg.dt) vns::write_field_output(u, p, d.t, snapshot_name(cfg, ts));
    if (d.step % every == 0 || d.step == nsteps)
      std::printf("  step %5d t=%.4f KE=%.10e max|div|=%.2e picard=%d\n", d.step, d.t,
                  d.kinetic_energy, d.max_divergence, d.picard_iterations);
  };
  vns::CaseResult res;
  try {
    res = vns::run_case(setup, observer);
  } catch (const vns::NonlinearDivergence& e) {
    vns::write_diagnostics(steps, in_dir(cfg, cfg.diagnostics));
    if (cfg.write_fields && last_u.space)
      vns::write_field_output(last_u, last_p, last_t, in_dir(cfg, cfg.field_file));
    std::fprintf(stderr, "error: %s after t=%.4f; wrote the state at t=%.4f\n", e.what(), last_t, last_t);
    return 3;
  }

  vns::write_diagnostics(res.run.steps, in_dir(cfg, cfg.diagnostics));
  if (cfg.write_fields)
    vns::write_field_output(res.run.u, res.run.p, res.run.t, in_dir(cfg, cfg.field_file));
  if (setup.has_exact()) {
    vns::ErrorReport row{cfg.k, res.h, res.dof, res.vel_error, res.pres_error, NAN, NAN};  // single mesh, no orders
    vns::write_error_table({row}, in_dir(cfg, cfg.error_table));
    std::printf("velocity L2 error %.3e, pressure L2 error %.3e\n", res.vel_error, res.pres_error);
  }
  std::printf("max |u| at t=%.4f: %.4f\n", res.run.t, res.max_speed);
  return 0;
}

int cmd_convergence(const std::string& config_path, const Overrides& ov) {
  const vns::CaseConfig cfg = vns::load_config(config_path, ov.to_json());
  fs::create_directories(cfg.out_dir);
  std::printf("%s %s k=%d zeta=%g eta=%g delta=%g\n", vns::case_name(cfg.case_kind),
              vns::formulation_name(cfg.formulation), cfg.k, cfg.zeta, cfg.eta, cfg.delta);
  const auto rows = vns::run_convergence(cfg, [](const vns::ErrorReport& r, const vns::CaseResult&) {
    std::printf("  h=%.4f dof=%ld vel=%.3e (%.2f) pres=%.3e (%.2f)\n", r.h, r.dof, r.vel_l2,
                r.vel_order, r.pres_l2, r.pres_order);
    std::fflush(stdout);
  });
  const std::string path = in_dir(cfg, cfg.error_table);
  vns::write_error_table(rows, path);
  vns::write_error_table(rows, std::cout);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& c : vns::run_verification_suite()) {
    std::printf("%s  %-10s %-42s %.3e  (bound %.1e)  %s\n", c.passed ? "pass" : "FAIL",
                c.group.c_str(), c.name.c_str(), c.value, c.tolerance, c.detail.c_str());
    ok = ok && c.passed;
  }
  std::printf(ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H(div)-conforming and Taylor-Hood incompressible Navier-Stokes solver"};
  app.require_subcommand(1);

  std::string run_config, conv_config;
  Overrides run_ov, conv_ov;
  auto* run = app.add_subcommand("run", "run one case");
  run->add_option("--config", run_config, "JSON config file");
  run_ov.add(run);
  auto* conv = app.add_subcommand("convergence", "multi-mesh error study");
  conv->add_option("--config", conv_config, "JSON config file");
  conv_ov.add(conv);
  conv->add_option("--nx-list", conv_ov.nx_list, "mesh sizes (default 10 20 40 50)")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "identity and property checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(run_config, run_ov);
    if (conv->parsed()) return cmd_convergence(conv_config, conv_ov);
    if (verify->parsed()) return cmd_verify();
  } catch (const vns::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
