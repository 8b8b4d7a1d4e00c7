#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "vns/forms.hpp"
#include "vns/space.hpp"

namespace vns {

enum class CaseKind { TaylorGreen, Gresho };

enum class Formulation { THSymmetric, THNonSymmetric, BDMSymmetric, BDMNonSymmetric, RTSymmetric };

const char* case_name(CaseKind c);
const char* formulation_name(Formulation f);
CaseKind parse_case_name(const std::string& s);
Formulation parse_formulation_name(const std::string& s);

/// Velocity family/degree, pressure family/degree and stress variant for
/// table degree k (k is the pressure degree).
struct Discretization {
  SpaceFamily velocity;
  int velocity_degree;
  SpaceFamily pressure;
  int pressure_degree;
  StressVariant variant;
};
Discretization discretization(Formulation f, int k);

struct CaseConfig {
  CaseKind case_kind = CaseKind::TaylorGreen;
  Formulation formulation = Formulation::BDMSymmetric;
  int k = 1;
  int nx = 10;
  int ny = 10;
  double nu = 0.01;
  double zeta = 0.5;
  double eta = 18.0;
  double delta = 0.0;
  double dt = 0.01;
  double t_end = 1.0;
  int bdf_order = 3;
  /// Seed the BDF history from the exact solution (Taylor-Green only).
  bool exact_start = true;
  std::vector<int> nx_list{10, 20, 40, 50};

  std::string out_dir = "out";
  std::string error_table = "errors.csv";
  std::string diagnostics = "diagnostics.csv";
  std::string field_file = "fields.vtk";
  bool write_fields = true;
  std::vector<double> field_times;  // extra snapshot times; t_end is always written

  FluxParams flux() const { return {zeta, eta, nu, delta}; }
  nlohmann::json to_json() const;
};

/// Builds a validated config from a JSON object. Entries missing from both
/// `file` and `overrides` get the case defaults (nu, t_end, nx depend on the
/// case; eta = 3(k+1)(k+2)). Throws ConfigError naming the first bad key.
CaseConfig parse_config(const nlohmann::json& file, const nlohmann::json& overrides = {});

/// Reads `path` (an empty path or empty file counts as {}) and applies the overrides.
CaseConfig load_config(const std::string& path, const nlohmann::json& overrides = {});

}  // namespace vns
