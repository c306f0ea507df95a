#include "scene.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "ribau/errors.hpp"

namespace ribau::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SceneError(where + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) throw SceneError(fmt::format("unknown key '{}' in {}", k, where));
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw SceneError(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SceneError(what + " must be finite");
  return x;
}

std::array<double, 2> range(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw SceneError(what + " must be [lo, hi]");
  return {number(j[0], what), number(j[1], what)};
}

std::array<int, 2> grid_size(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw SceneError("grid must be [nu, nv]");
  }
  const std::array<int, 2> g{j[0].get<int>(), j[1].get<int>()};
  if (g[0] < 4 || g[1] < 4) throw SceneError(fmt::format("grid {}x{} is smaller than 4x4", g[0], g[1]));
  return g;
}

TauExpr tau_of(const json& j, const std::string& what) {
  if (!j.is_string()) throw SceneError(what + " must be an expression string");
  try {
    return parse_tau(j.get<std::string>());
  } catch (const ParseError& e) {
    throw SceneError(fmt::format("{}: {}", what, e.what()));
  }
}

Expr expr_of(const json& j, const std::string& what) { return tau_of(j, what).ast; }

Domain domain_of(const json& j) {
  only_keys(j, {"u", "v", "periodic"}, "domain");
  Domain d;
  if (j.contains("u")) {
    const auto r = range(j["u"], "domain.u");
    d.u0 = r[0];
    d.u1 = r[1];
  }
  if (j.contains("v")) {
    const auto r = range(j["v"], "domain.v");
    d.v0 = r[0];
    d.v1 = r[1];
  }
  d.periodic_u = d.periodic_v = false;
  if (j.contains("periodic")) {
    const json& p = j["periodic"];
    if (!p.is_array() || p.size() != 2 || !p[0].is_boolean() || !p[1].is_boolean()) {
      throw SceneError("domain.periodic must be [bool, bool]");
    }
    d.periodic_u = p[0].get<bool>();
    d.periodic_v = p[1].get<bool>();
  }
  if (d.empty()) throw SceneError("chart domain is empty");
  return d;
}

const std::vector<std::pair<std::string, double Tolerances::*>>& tolerance_fields() {
  static const std::vector<std::pair<std::string, double Tolerances::*>> fields{
      {"singular", &Tolerances::singular},
      {"contact", &Tolerances::contact},
      {"closedness", &Tolerances::closedness},
      {"hat_frame", &Tolerances::hat_frame},
      {"pair", &Tolerances::pair},
      {"reconstruction", &Tolerances::reconstruction},
      {"alpha_sum", &Tolerances::alpha_sum},
      {"involution", &Tolerances::involution},
      {"curvature", &Tolerances::curvature},
      {"shape_path", &Tolerances::shape_path},
      {"loop", &Tolerances::loop},
      {"bianchi", &Tolerances::bianchi},
      {"mask", &Tolerances::mask},
      {"parallel", &Tolerances::parallel},
      {"dual_consistency", &Tolerances::dual_consistency},
      {"gamma_identity", &Tolerances::gamma_identity},
  };
  return fields;
}

}  // namespace

double parse_angle(const json& j) {
  if (j.is_number()) return number(j, "theta");
  if (!j.is_string()) throw SceneError("theta must be a number or a string like \"pi/4\"");
  const std::string s = j.get<std::string>();
  static const std::regex re(R"(^\s*(?:([0-9]*\.?[0-9]+)\s*\*?\s*)?pi(?:\s*/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, re)) {
    const double k = m[1].matched ? std::stod(m[1].str()) : 1.0;
    const double n = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (n == 0.0) throw SceneError("theta '" + s + "' divides by zero");
    return k * std::numbers::pi / n;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
    throw SceneError("cannot read angle '" + s + "'");
  }
  return x;
}

std::vector<double> parse_angle_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(json(item)));
  if (out.empty()) throw SceneError("empty theta list");
  return out;
}

std::array<int, 2> parse_grid_size(const std::string& text) {
  static const std::regex re(R"(^\s*([0-9]+)\s*[xX]\s*([0-9]+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw SceneError("grid must look like 64x64, got '" + text + "'");
  return grid_size(json::array({std::stoi(m[1].str()), std::stoi(m[2].str())}));
}

std::vector<double> default_thetas() {
  std::vector<double> t;
  for (int k = 0; k < 8; ++k) t.push_back(k * std::numbers::pi / 8.0);
  return t;
}

ChartSpec parse_chart(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw SceneError("chart needs a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "clifford_torus") {
      only_keys(j, {"kind", "r"}, "clifford_torus chart");
      return ChartSpec::clifford_torus(j.contains("r") ? number(j["r"], "chart.r") : std::numbers::sqrt2 / 2.0);
    }
    if (kind == "parallel_of") {
      only_keys(j, {"kind", "base", "c"}, "parallel_of chart");
      if (!j.contains("base") || !j.contains("c")) throw SceneError("parallel_of needs \"base\" and \"c\"");
      return ChartSpec::parallel_of(parse_chart(j["base"]), number(j["c"], "chart.c"));
    }
    if (kind == "custom") {
      only_keys(j, {"kind", "f", "xi", "domain"}, "custom chart");
      if (!j.contains("f") || !j.contains("xi") || !j.contains("domain")) {
        throw SceneError("custom chart needs \"f\", \"xi\" and \"domain\"");
      }
      std::array<Expr, 4> f, xi;
      for (const auto& [key, dst] : {std::pair{"f", &f}, std::pair{"xi", &xi}}) {
        const json& arr = j[key];
        if (!arr.is_array() || arr.size() != 4) throw SceneError(fmt::format("chart.{} needs 4 expressions", key));
        for (int k = 0; k < 4; ++k) (*dst)[k] = expr_of(arr[k], fmt::format("chart.{}[{}]", key, k));
      }
      return ChartSpec::custom(f, xi, domain_of(j["domain"]));
    }
  } catch (const SceneError&) {
    throw;
  } catch (const Error& e) {
    throw SceneError(e.what());
  }
  throw SceneError("unknown chart kind '" + kind + "'");
}

json chart_to_json(const ChartSpec& chart) {
  switch (chart.kind) {
    case ChartKind::clifford_torus:
      return {{"kind", "clifford_torus"}, {"r", chart.r}};
    case ChartKind::parallel_of:
      return {{"kind", "parallel_of"}, {"base", chart_to_json(*chart.base)}, {"c", chart.c}};
    case ChartKind::custom: {
      json f = json::array(), xi = json::array();
      for (int k = 0; k < 4; ++k) {
        f.push_back(print_expr(chart.f_exprs[k]));
        xi.push_back(print_expr(chart.xi_exprs[k]));
      }
      const Domain& d = chart.domain;
      return {{"kind", "custom"},
              {"f", f},
              {"xi", xi},
              {"domain", {{"u", {d.u0, d.u1}}, {"v", {d.v0, d.v1}}, {"periodic", {d.periodic_u, d.periodic_v}}}}};
    }
  }
  return {};
}

Scene parse_scene(const json& j, bool require_tau) {
  only_keys(j, {"chart", "tau", "tau1", "grid", "thetas", "tolerances", "outputs", "pole_flip", "dual", "oracle"},
            "scene");
  Scene s;
  if (j.contains("chart")) {
    s.chart = parse_chart(j["chart"]);
  } else if (require_tau) {
    throw SceneError("scene needs a \"chart\"");
  }
  if (j.contains("tau")) {
    s.tau = tau_of(j["tau"], "tau");
  } else if (require_tau) {
    throw SceneError("scene needs a \"tau\"");
  }
  if (j.contains("tau1")) s.tau1 = tau_of(j["tau1"], "tau1");
  if (j.contains("grid")) s.grid = grid_size(j["grid"]);
  if (j.contains("thetas")) {
    if (!j["thetas"].is_array() || j["thetas"].empty()) throw SceneError("thetas must be a non-empty list");
    for (const json& t : j["thetas"]) s.thetas.push_back(parse_angle(t));
  } else {
    s.thetas = default_thetas();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw SceneError("tolerances must be an object");
    for (const auto& [k, v] : t.items()) {
      bool found = false;
      for (const auto& [name, field] : tolerance_fields()) {
        if (name == k) {
          s.tol.*field = number(v, "tolerances." + k);
          found = true;
        }
      }
      if (!found) throw SceneError("unknown tolerance '" + k + "'");
    }
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) throw SceneError("outputs must be a list");
    for (const json& o : j["outputs"]) {
      only_keys(o, {"kind", "surface", "theta", "path"}, "output");
      OutputRequest r;
      if (!o.contains("kind") || !o["kind"].is_string() || !o.contains("path") || !o["path"].is_string()) {
        throw SceneError("each output needs \"kind\" and \"path\" strings");
      }
      r.kind = o["kind"].get<std::string>();
      r.path = o["path"].get<std::string>();
      if (r.kind != "obj" && r.kind != "csv" && r.kind != "json") throw SceneError("unknown output kind '" + r.kind + "'");
      if (o.contains("surface")) {
        if (!o["surface"].is_string()) throw SceneError("output surface must be \"f\" or \"f_hat\"");
        r.surface = o["surface"].get<std::string>();
        if (r.surface != "f" && r.surface != "f_hat") throw SceneError("output surface must be \"f\" or \"f_hat\"");
      }
      if (o.contains("theta")) r.theta = parse_angle(o["theta"]);
      s.outputs.push_back(r);
    }
  }
  if (j.contains("pole_flip")) {
    if (!j["pole_flip"].is_boolean()) throw SceneError("pole_flip must be a boolean");
    s.pole_flip = j["pole_flip"].get<bool>();
  }
  if (j.contains("dual")) {
    const json& d = j["dual"];
    only_keys(d, {"patch", "grid", "initial_offset"}, "dual");
    DualRequest r;
    if (d.contains("patch")) {
      only_keys(d["patch"], {"u", "v"}, "dual.patch");
      const auto u = range(d["patch"].value("u", json::array({r.patch.u0, r.patch.u1})), "dual.patch.u");
      const auto v = range(d["patch"].value("v", json::array({r.patch.v0, r.patch.v1})), "dual.patch.v");
      r.patch = Domain::patch(u[0], u[1], v[0], v[1]);
      if (r.patch.empty()) throw SceneError("dual patch is empty");
    }
    if (d.contains("grid")) r.grid = grid_size(d["grid"]);
    if (d.contains("initial_offset")) r.initial_offset = number(d["initial_offset"], "dual.initial_offset");
    if (r.initial_offset == 0.0) throw SceneError("dual.initial_offset must be nonzero");
    s.dual = r;
  }
  if (j.contains("oracle")) {
    const json& o = j["oracle"];
    only_keys(o, {"seed", "cases"}, "oracle");
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw SceneError("oracle.seed must be a non-negative integer");
      s.oracle.seed = o["seed"].get<std::uint64_t>();
    }
    if (o.contains("cases")) {
      if (!o["cases"].is_number_integer() || o["cases"].get<int>() < 1) throw SceneError("oracle.cases must be >= 1");
      s.oracle.cases = o["cases"].get<int>();
    }
  }
  return s;
}

Scene load_scene(const std::string& path, bool require_tau) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SceneError(fmt::format("{}: {}", path, e.what()));
  }
  return parse_scene(j, require_tau);
}

}  // namespace ribau::cli
