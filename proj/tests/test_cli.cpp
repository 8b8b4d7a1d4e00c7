#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "vns/cases.hpp"
#include "vns/config.hpp"
#include "vns/errors.hpp"
#include "vns/output.hpp"

using namespace vns;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "vns_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults from an empty file") {
  const fs::path p = scratch("empty.json");
  std::ofstream(p).close();
  auto c = load_config(p.string(), json{{"case", "taylor_green"}});
  CHECK(c.case_kind == CaseKind::TaylorGreen);
  CHECK(c.nu == 0.01);
  CHECK(c.dt == 0.01);
  CHECK(c.t_end == 1.0);
  CHECK(c.eta == 18.0);
}

TEST_CASE("eta follows the degree") {
  CHECK(parse_config(json{{"k", 2}}).eta == 36.0);
  CHECK(parse_config(json{{"k", 3}}).eta == 60.0);
  CHECK(parse_config(json{{"k", 2}, {"eta", 5.0}}).eta == 5.0);
}

TEST_CASE("flags override the file") {
  auto c = parse_config(json{{"nx", 12}, {"zeta", 0.5}}, json{{"zeta", 0.0}});
  CHECK(c.zeta == 0.0);
  CHECK(c.nx == 12);
  CHECK(c.ny == 12);
}

TEST_CASE("rejections name the key") {
  auto key_of = [](const json& j) {
    try {
      parse_config(j);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  CHECK(key_of(json{{"zeta", 2}}) == "zeta");
  CHECK(key_of(json{{"k", 4}}) == "k");
  CHECK(key_of(json{{"bogus", 1}}) == "bogus");
  CHECK(key_of(json{{"dt", 0.03}}) == "t_end");
  CHECK(key_of(json{{"formulation", "BDM"}}) == "formulation");
  CHECK(key_of(json{{"nu", -1.0}}) == "nu");
  CHECK(key_of(json{{"outputs", {{"nope", "x"}}}}).find("nope") != std::string::npos);
}

TEST_CASE("gresho defaults") {
  auto c = parse_config(json{{"case", "gresho"}});
  CHECK(c.nu == 5e-6);
  CHECK(c.t_end == 14.0);
  CHECK(c.nx == 28);
}

TEST_CASE("json round trip") {
  CaseConfig c = parse_config(json{{"formulation", "TH-NonSymmetric"}, {"k", 2}, {"delta", 10.0}});
  CaseConfig d = parse_config(c.to_json());
  CHECK(d.formulation == Formulation::THNonSymmetric);
  CHECK(d.delta == 10.0);
  CHECK(d.eta == c.eta);
}

}

TEST_SUITE("cases") {

TEST_CASE("Taylor-Green exact fields") {
  CHECK((taylor_green_velocity({pi / 2, 0}, 0, 0.01) - Vec2(1, 0)).norm() < 1e-15);
  CHECK(taylor_green_pressure({0, 0}, 0, 0.01) == doctest::Approx(0.5));
  CHECK(taylor_green_vorticity({pi / 2, pi / 2}, 0, 0.01) == doctest::Approx(2.0));
}

TEST_CASE("Gresho profile") {
  CHECK(gresho_angular_velocity(0.1) == doctest::Approx(0.5));
  CHECK(gresho_angular_velocity(0.3) == doctest::Approx(0.5));
  CHECK(gresho_angular_velocity(0.5) == 0.0);
  CHECK(gresho_angular_velocity(0.2) == doctest::Approx(1.0));
  const Vec2 u = gresho_velocity({0.1, 0});
  CHECK((u - Vec2(0, 0.5)).norm() < 1e-15);
}

TEST_CASE("setups") {
  auto tg = setup_case(parse_config(json{{"nx", 10}}));
  CHECK(tg.dof() == 2101);
  CHECK(tg.h() == doctest::Approx(0.8886).epsilon(1e-4));
  CHECK(tg.has_exact());
  CHECK(tg.topology->faces.boundary_ids.empty());

  auto gr = setup_case(parse_config(json{{"case", "gresho"}, {"nx", 8}}));
  CHECK_FALSE(gr.has_exact());
  CHECK(gr.topology->faces.boundary_ids.size() == 32);
  CHECK(gr.topology->mesh.domain.x_min == -0.5);

  auto th = setup_case(parse_config(json{{"formulation", "TH-Symmetric"}, {"nx", 10}}));
  CHECK(th.dof() == 901);
}

TEST_CASE("Taylor-Green BDM_1 at h = 0.4443") {
  auto res = run_case(setup_case(parse_config(json{{"nx", 20}, {"outputs", {{"write_fields", false}}}})));
  CHECK(res.vel_error == doctest::Approx(2.46e-3).epsilon(0.5));
  CHECK(res.vel_error < 1.5 * 2.46e-3);
  CHECK(res.vel_error > 2.46e-3 / 1.5);
}

TEST_CASE("convergence needs an exact solution") {
  CHECK_THROWS_AS(run_convergence(parse_config(json{{"case", "gresho"}})), InvalidArgument);
}

}

TEST_SUITE("output") {

TEST_CASE("error table format and round trip") {
  std::vector<ErrorReport> rows{{1, 0.8886, 2101, 1.98e-2, 6.79e-2, NAN, NAN},
                                {1, 0.4443, 8401, 2.46e-3, 1.72e-2, 3.01, 1.98}};
  std::ostringstream out;
  write_error_table(rows, out);
  const std::string text = out.str();
  CHECK(text.rfind("k,h,dof,vel_error,vel_order,pres_error,pres_order\n", 0) == 0);
  CHECK(text.find("1,0.8886,2101,1.98e-02,,6.79e-02,\n") != std::string::npos);
  CHECK(text.find("1,0.4443,8401,2.46e-03,3.01,1.72e-02,1.98\n") != std::string::npos);

  std::istringstream in(text);
  auto back = read_error_table(in);
  REQUIRE(back.size() == 2);
  CHECK(std::isnan(back[0].vel_order));
  CHECK(back[1].dof == 8401);
  CHECK(back[1].vel_l2 == 2.46e-3);
  CHECK(back[1].pres_order == 1.98);

  const fs::path p = scratch("errors.csv");
  write_error_table(rows, p.string());
  CHECK(slurp(p) == text);
  CHECK_THROWS_AS(write_error_table(rows, "/nonexistent/dir/x.csv"), IoError);
}

TEST_CASE("VTK output") {
  auto topo = test::periodic_box(4);
  auto V = build_function_space(topo, SpaceFamily::BDM, 2);
  auto Q = build_function_space(topo, SpaceFamily::DCPressure, 1);

  std::ostringstream zero;
  write_field_output(DiscreteField(V), DiscreteField(Q), 0.0, zero);
  const std::string z = zero.str();
  CHECK(z.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(z.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(z.find("VECTORS velocity") != std::string::npos);
  CHECK(z.find("SCALARS pressure") != std::string::npos);
  CHECK(z.find("SCALARS velocity_magnitude") != std::string::npos);
  CHECK(z.find("SCALARS vorticity") != std::string::npos);
  // no nonzero numbers in the data sections
  const std::string data = z.substr(z.find("POINT_DATA"));
  CHECK(data.find("1.") == std::string::npos);

  CHECK_THROWS_AS(write_field_output(DiscreteField(V), DiscreteField(Q), 0.0, "/nonexistent/dir/f.vtk"), IoError);
}

TEST_CASE("vorticity of the Taylor-Green interpolant") {
  auto topo = test::periodic_box(16);
  auto V = build_function_space(topo, SpaceFamily::BDM, 3);
  auto u = interpolate_field(V, VectorFunction([](const Vec2& x) { return taylor_green_velocity(x, 0, 0.01); }));
  auto loc = locate_point(*topo, {pi / 2, pi / 2});
  Mat2 g;
  u.vector_value(loc.element, loc.xhat, &g);
  CHECK(g(1, 0) - g(0, 1) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("Gresho initial speed peaks near one") {
  auto setup = setup_case(parse_config(json{{"case", "gresho"}}));
  auto u = interpolate_field(setup.problem.velocity,
                             VectorFunction([&](const Vec2& x) { return setup.initial.velocity(x, 0); }));
  CHECK(max_speed(u) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("repeated runs write identical files") {
  auto cfg = parse_config(json{{"nx", 4}, {"t_end", 0.05}, {"out_dir", scratch("det").string()}});
  std::string first_csv, first_vtk;
  for (int rep = 0; rep < 2; ++rep) {
    auto res = run_case(setup_case(cfg));
    std::ostringstream csv, vtk;
    write_diagnostics(res.run.steps, csv);
    write_field_output(res.run.u, res.run.p, res.run.t, vtk);
    if (rep == 0) {
      first_csv = csv.str();
      first_vtk = vtk.str();
    } else {
      CHECK(csv.str() == first_csv);
      CHECK(vtk.str() == first_vtk);
    }
  }
}

}
