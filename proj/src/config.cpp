#include "vns/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vns/errors.hpp"

namespace vns {

using nlohmann::json;

const char* case_name(CaseKind c) {
  return c == CaseKind::TaylorGreen ? "taylor_green" : "gresho";
}

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::THSymmetric: return "TH-Symmetric";
    case Formulation::THNonSymmetric: return "TH-NonSymmetric";
    case Formulation::BDMSymmetric: return "BDM-Symmetric";
    case Formulation::BDMNonSymmetric: return "BDM-NonSymmetric";
    case Formulation::RTSymmetric: return "RT-Symmetric";
  }
  return "?";
}

CaseKind parse_case_name(const std::string& s) {
  if (s == "taylor_green") return CaseKind::TaylorGreen;
  if (s == "gresho") return CaseKind::Gresho;
  throw ConfigError("case", "expected taylor_green or gresho, got '" + s + "'");
}

Formulation parse_formulation_name(const std::string& s) {
  for (Formulation f : {Formulation::THSymmetric, Formulation::THNonSymmetric,
                        Formulation::BDMSymmetric, Formulation::BDMNonSymmetric,
                        Formulation::RTSymmetric})
    if (s == formulation_name(f)) return f;
  throw ConfigError("formulation", "unknown formulation '" + s + "'");
}

Discretization discretization(Formulation f, int k) {
  switch (f) {
    case Formulation::THSymmetric:
      return {SpaceFamily::THVelocity, k + 1, SpaceFamily::THPressure, k,
              StressVariant::FullDeviatoric};
    case Formulation::THNonSymmetric:
      return {SpaceFamily::THVelocity, k + 1, SpaceFamily::THPressure, k,
              StressVariant::GradientOnly};
    case Formulation::BDMSymmetric:
      return {SpaceFamily::BDM, k + 1, SpaceFamily::DCPressure, k, StressVariant::SymmetricPair};
    case Formulation::BDMNonSymmetric:
      return {SpaceFamily::BDM, k + 1, SpaceFamily::DCPressure, k, StressVariant::GradientOnly};
    case Formulation::RTSymmetric:
      return {SpaceFamily::RT, k, SpaceFamily::DCPressure, k, StressVariant::SymmetricPair};
  }
  throw InvalidArgument("unknown formulation");
}

namespace {

const std::set<std::string> kKeys = {
    "case", "formulation", "k", "nx", "ny", "nu", "zeta", "eta", "delta", "dt", "t_end",
    "bdf_order", "exact_start", "nx_list", "out_dir", "outputs"};
const std::set<std::string> kOutputKeys = {"error_table", "diagnostics", "fields", "write_fields",
                                           "field_times"};

template <class T>
T get(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "wrong type (" + std::string(j.type_name()) + ")");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  return j.get<int>();
}

// Overlays `b` onto `a`, one level deep for "outputs".
json merge(json a, const json& b) {
  if (b.is_null()) return a;
  if (!b.is_object()) throw ConfigError("<root>", "overrides must be a JSON object");
  for (auto it = b.begin(); it != b.end(); ++it) {
    if (it.key() == "outputs" && it.value().is_object() && a.contains("outputs") &&
        a["outputs"].is_object()) {
      for (auto o = it.value().begin(); o != it.value().end(); ++o) a["outputs"][o.key()] = o.value();
    } else {
      a[it.key()] = it.value();
    }
  }
  return a;
}

}  // namespace

CaseConfig parse_config(const json& file, const json& overrides) {
  json j = file.is_null() ? json::object() : file;
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  j = merge(j, overrides);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKeys.count(it.key())) throw ConfigError(it.key(), "unknown key");

  CaseConfig c;
  if (j.contains("case")) c.case_kind = parse_case_name(get<std::string>(j["case"], "case"));
  const bool gresho = c.case_kind == CaseKind::Gresho;
  c.nu = gresho ? 5e-6 : 0.01;
  c.t_end = gresho ? 14.0 : 1.0;
  c.nx = gresho ? 28 : 10;
  c.exact_start = !gresho;

  if (j.contains("formulation"))
    c.formulation = parse_formulation_name(get<std::string>(j["formulation"], "formulation"));
  if (j.contains("k")) c.k = get_int(j["k"], "k");
  if (c.k < 1 || c.k > 3) throw ConfigError("k", "must be 1, 2 or 3");
  if (j.contains("nx")) c.nx = get_int(j["nx"], "nx");
  c.ny = c.nx;
  if (j.contains("ny")) c.ny = get_int(j["ny"], "ny");
  if (c.nx < 2) throw ConfigError("nx", "must be at least 2");
  if (c.ny < 2) throw ConfigError("ny", "must be at least 2");
  if (j.contains("nu")) c.nu = get_number(j["nu"], "nu");
  if (!(c.nu > 0.0)) throw ConfigError("nu", "must be positive");
  if (j.contains("zeta")) c.zeta = get_number(j["zeta"], "zeta");
  if (c.zeta < 0.0 || c.zeta > 1.0) throw ConfigError("zeta", "must lie in [0, 1]");
  c.eta = default_eta(c.k);
  if (j.contains("eta") && !j["eta"].is_null()) c.eta = get_number(j["eta"], "eta");
  if (!(c.eta > 0.0)) throw ConfigError("eta", "must be positive");
  if (j.contains("delta")) c.delta = get_number(j["delta"], "delta");
  if (c.delta < 0.0) throw ConfigError("delta", "must be non-negative");
  if (j.contains("dt")) c.dt = get_number(j["dt"], "dt");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (j.contains("t_end")) c.t_end = get_number(j["t_end"], "t_end");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  const double steps = c.t_end / c.dt;
  if (steps < 1.0 - 1e-12 || std::abs(steps - std::round(steps)) > 1e-8 * std::max(1.0, steps))
    throw ConfigError("t_end", "must be a positive whole number of time steps");
  if (j.contains("bdf_order")) c.bdf_order = get_int(j["bdf_order"], "bdf_order");
  if (c.bdf_order < 1 || c.bdf_order > 3) throw ConfigError("bdf_order", "must be 1, 2 or 3");
  if (j.contains("exact_start")) c.exact_start = get<bool>(j["exact_start"], "exact_start");
  if (gresho && c.exact_start)
    throw ConfigError("exact_start", "the gresho case has no exact solution");
  if (j.contains("nx_list")) {
    if (!j["nx_list"].is_array() || j["nx_list"].empty())
      throw ConfigError("nx_list", "expected a non-empty array of integers");
    c.nx_list.clear();
    for (const auto& v : j["nx_list"]) {
      const int n = get_int(v, "nx_list");
      if (n < 2) throw ConfigError("nx_list", "entries must be at least 2");
      if (!c.nx_list.empty() && n <= c.nx_list.back())
        throw ConfigError("nx_list", "entries must be strictly increasing");
      c.nx_list.push_back(n);
    }
  }
  if (j.contains("out_dir")) c.out_dir = get<std::string>(j["out_dir"], "out_dir");
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ConfigError("outputs", "expected an object");
    for (auto it = o.begin(); it != o.end(); ++it)
      if (!kOutputKeys.count(it.key())) throw ConfigError("outputs." + it.key(), "unknown key");
    if (o.contains("error_table"))
      c.error_table = get<std::string>(o["error_table"], "outputs.error_table");
    if (o.contains("diagnostics"))
      c.diagnostics = get<std::string>(o["diagnostics"], "outputs.diagnostics");
    if (o.contains("fields")) c.field_file = get<std::string>(o["fields"], "outputs.fields");
    if (o.contains("write_fields"))
      c.write_fields = get<bool>(o["write_fields"], "outputs.write_fields");
    if (o.contains("field_times")) {
      if (!o["field_times"].is_array()) throw ConfigError("outputs.field_times", "expected an array");
      for (const auto& v : o["field_times"]) {
        const double t = get_number(v, "outputs.field_times");
        if (t < 0.0 || t > c.t_end) throw ConfigError("outputs.field_times", "outside [0, t_end]");
        c.field_times.push_back(t);
      }
    }
  }
  return c;
}

CaseConfig load_config(const std::string& path, const json& overrides) {
  json file = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      try {
        file = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
      }
    }
  }
  return parse_config(file, overrides);
}

json CaseConfig::to_json() const {
  json o = {{"error_table", error_table},
            {"diagnostics", diagnostics},
            {"fields", field_file},
            {"write_fields", write_fields},
            {"field_times", field_times}};
  return json{{"case", case_name(case_kind)},
              {"formulation", formulation_name(formulation)},
              {"k", k},
              {"nx", nx},
              {"ny", ny},
              {"nu", nu},
              {"zeta", zeta},
              {"eta", eta},
              {"delta", delta},
              {"dt", dt},
              {"t_end", t_end},
              {"bdf_order", bdf_order},
              {"exact_start", exact_start},
              {"nx_list", nx_list},
              {"out_dir", out_dir},
              {"outputs", o}};
}

}  // namespace vns
