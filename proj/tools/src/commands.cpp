#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "ribau/demoulin.hpp"
#include "ribau/errors.hpp"
#include "ribau/export.hpp"
#include "ribau/oracle.hpp"
#include "ribau/sweep.hpp"

namespace ribau::cli {

using nlohmann::json;

namespace {

void add_check(json& checks, const std::string& name, double value, double tol) {
  checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", value < tol}});
}

void add_flag(json& checks, const std::string& name, bool ok, double value) {
  checks.push_back({{"name", name}, {"value", value}, {"pass", ok}});
}

bool all_pass(const json& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c["pass"].get<bool>(); });
}

Grid scene_grid(const Scene& s) { return Grid(s.chart.domain, s.grid[0], s.grid[1]); }

std::string tau_source(const Scene& s) { return s.tau ? s.tau->source : std::string(); }

double contact_gate(const Scene& s) { return s.tol.contact > 0 ? s.tol.contact : s.chart.contact_tolerance(); }

std::filesystem::path artifact_path(const Options& opts, const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_relative()) p = std::filesystem::path(opts.out_dir.empty() ? "." : opts.out_dir) / p;
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw SceneError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw SceneError("failed writing '" + p.string() + "'");
}

json range_of(const std::vector<PointRecord>& pts, double PointRecord::*field) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const PointRecord& p : pts) {
    if (!p.regular) continue;
    lo = std::min(lo, p.*field);
    hi = std::max(hi, p.*field);
  }
  return json::array({lo, hi});
}

json sweep_summary(const Scene& s, const SweepReport& rep) {
  json j;
  j["chart"] = chart_to_json(s.chart);
  j["tau_src"] = tau_source(s);
  j["grid"] = {s.grid[0], s.grid[1]};
  j["regular"] = rep.regular;
  j["nonregular_count"] = rep.nonregular_count;
  for (const PointRecord& p : rep.points) {
    if (!p.regular) {
      j["nonregular_at"] = {p.u, p.v};
      break;
    }
  }
  j["min_det"] = rep.min_det;
  j["max_dalpha"] = rep.max_dalpha;
  j["max_dalpha_at"] = {rep.max_dalpha_at[0], rep.max_dalpha_at[1]};
  j["max_alpha"] = rep.max_alpha;
  j["ribaucour"] = rep.ribaucour;
  const SweepMaxima& m = rep.maxima;
  j["residuals"] = {{"frame", m.frame},
                    {"hat_frame", m.hat_frame},
                    {"pair", m.pair},
                    {"reconstruction", m.reconstruction},
                    {"alpha_sum", m.alpha_sum},
                    {"involution", m.involution},
                    {"curvature_identity", m.curvature},
                    {"shape_operator_path", m.shape_path}};
  return j;
}

json sweep_checks(const Scene& s, const SweepReport& rep, bool require_ribaucour) {
  const SweepMaxima& m = rep.maxima;
  const Tolerances& t = s.tol;
  json checks = json::array();
  add_check(checks, "frame_certification", m.frame, contact_gate(s));
  add_flag(checks, "regular", rep.regular, rep.nonregular_count);
  if (require_ribaucour) add_flag(checks, "ribaucour", rep.ribaucour, rep.max_dalpha);
  add_check(checks, "hat_frame", m.hat_frame, t.hat_frame);
  add_check(checks, "pair", m.pair, t.pair);
  add_check(checks, "reconstruction", m.reconstruction, t.reconstruction);
  add_check(checks, "alpha_sum", m.alpha_sum, t.alpha_sum);
  add_check(checks, "involution", m.involution, t.involution);
  add_check(checks, "curvature_identity", m.curvature, t.curvature);
  add_check(checks, "shape_operator_path", m.shape_path, t.shape_path);
  return checks;
}

json write_mesh(const Grid& grid, const SweepReport& rep, bool hat, bool pole_flip, const std::filesystem::path& p,
                const std::string& comment) {
  const auto pts = surface_points(rep, hat);
  const MeshExport mesh = build_mesh(grid, pts, pole_flip);
  write_file(p, to_obj(mesh, comment));
  json j{{"kind", "obj"},
         {"path", p.generic_string()},
         {"surface", hat ? "f_hat" : "f"},
         {"vertices", mesh.vertices.size()},
         {"faces", mesh.faces.size()},
         {"clipped", mesh.clipped}};
  if (!mesh.warning.empty()) j["warning"] = mesh.warning;
  return j;
}

std::string mesh_comment(const Scene& s, bool hat, std::optional<double> theta = std::nullopt) {
  std::string c = fmt::format("ribau {} of {} tau={}", hat ? "f_hat" : "f", s.chart.describe(), tau_source(s));
  if (theta) c += fmt::format(" theta={}", *theta);
  return c;
}

// Artifacts for a plain sweep (transform and export commands).
json write_sweep_outputs(const Scene& s, const Options& opts, const SweepReport& rep, bool with_csv) {
  const Grid grid = scene_grid(s);
  const bool flip = s.pole_flip || opts.pole_flip;
  std::vector<OutputRequest> outs = s.outputs;
  if (outs.empty()) {
    outs.push_back({"obj", "f", std::nullopt, "f.obj"});
    outs.push_back({"obj", "f_hat", std::nullopt, "f_hat.obj"});
    if (with_csv) outs.push_back({"csv", "f", std::nullopt, "fields.csv"});
  }
  json written = json::array();
  for (const OutputRequest& o : outs) {
    const auto p = artifact_path(opts, o.path);
    if (o.kind == "obj") {
      const bool hat = o.surface == "f_hat";
      written.push_back(write_mesh(grid, rep, hat, flip, p, mesh_comment(s, hat)));
    } else if (o.kind == "csv") {
      write_file(p, to_csv(rep));
      written.push_back({{"kind", "csv"}, {"path", p.generic_string()}, {"rows", rep.points.size()}});
    }
  }
  return written;
}

void write_json_outputs(const Scene& s, const Options& opts, const json& report) {
  for (const OutputRequest& o : s.outputs) {
    if (o.kind == "json") write_file(artifact_path(opts, o.path), report.dump(2) + "\n");
  }
}

const char* error_name(const std::exception& e) {
  if (dynamic_cast<const SceneError*>(&e)) return "SceneError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ContactViolation*>(&e)) return "ContactViolation";
  if (dynamic_cast<const NotImmersed*>(&e)) return "NotImmersed";
  if (dynamic_cast<const OutOfDomain*>(&e)) return "OutOfDomain";
  if (dynamic_cast<const NotRegular*>(&e)) return "NotRegular";
  if (dynamic_cast<const NotRibaucour*>(&e)) return "NotRibaucour";
  if (dynamic_cast<const NotPointwiseDistinct*>(&e)) return "NotPointwiseDistinct";
  if (dynamic_cast<const PathDependence*>(&e)) return "PathDependence";
  if (dynamic_cast<const BianchiViolation*>(&e)) return "BianchiViolation";
  if (dynamic_cast<const FullyMasked*>(&e)) return "FullyMasked";
  if (dynamic_cast<const BlowUp*>(&e)) return "BlowUp";
  if (dynamic_cast<const IllPosed*>(&e)) return "IllPosed";
  if (dynamic_cast<const InvolutionFailure*>(&e)) return "InvolutionFailure";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "exception";
}

bool is_input_error(const std::exception& e) {
  return dynamic_cast<const SceneError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
         dynamic_cast<const ContactViolation*>(&e) || dynamic_cast<const NotImmersed*>(&e) ||
         dynamic_cast<const OutOfDomain*>(&e) || dynamic_cast<const std::filesystem::filesystem_error*>(&e);
}

}  // namespace

Outcome cmd_check(const Scene& s, const Options&) {
  const SweepReport rep = sweep(s.chart, tau_sampler(s.tau->ast), scene_grid(s), s.tol);
  json r = sweep_summary(s, rep);
  r["command"] = "check";
  r["checks"] = sweep_checks(s, rep, true);
  r["pass"] = all_pass(r["checks"]);
  return {r["pass"].get<bool>() ? kPass : kFail, r};
}

Outcome cmd_transform(const Scene& s, const Options& opts) {
  const SweepReport rep = sweep(s.chart, tau_sampler(s.tau->ast), scene_grid(s), s.tol);
  json r = sweep_summary(s, rep);
  r["command"] = "transform";
  r["checks"] = sweep_checks(s, rep, false);
  r["a"] = range_of(rep.points, &PointRecord::a);
  r["b"] = range_of(rep.points, &PointRecord::b);
  r["mu2"] = range_of(rep.points, &PointRecord::mu2);
  r["involution"] = rep.maxima.involution;
  if (rep.regular) {
    r["artifacts"] = write_sweep_outputs(s, opts, rep, true);
  } else {
    r["artifacts"] = json::array();
  }
  r["pass"] = all_pass(r["checks"]);
  return {r["pass"].get<bool>() ? kPass : kFail, r};
}

Outcome cmd_export(const Scene& s, const Options& opts) {
  const SweepReport rep = sweep(s.chart, tau_sampler(s.tau->ast), scene_grid(s), s.tol);
  json r{{"command", "export"}, {"chart", chart_to_json(s.chart)}, {"tau_src", tau_source(s)},
         {"grid", {s.grid[0], s.grid[1]}}};
  r["artifacts"] = write_sweep_outputs(s, opts, rep, false);
  r["pass"] = true;
  return {kPass, r};
}

Outcome cmd_demoulin(const Scene& s, const Options& opts) {
  if (!s.tau1) throw SceneError("the demoulin command needs \"tau1\" in the scene");
  const Grid grid = scene_grid(s);
  const TauSampler t0 = tau_sampler(s.tau->ast), t1 = tau_sampler(s.tau1->ast);
  json r{{"command", "demoulin"},
         {"chart", chart_to_json(s.chart)},
         {"tau_src", s.tau->source},
         {"tau1_src", s.tau1->source},
         {"grid", {s.grid[0], s.grid[1]}}};
  json checks = json::array();

  const DemoulinFamily fam = make_demoulin_family(s.chart, t0, t1, grid, s.tol);
  const auto r0 = r_operator_field(s.chart, t0, grid, s.tol);
  const auto r1 = r_operator_field(s.chart, t1, grid, s.tol);
  const BianchiReport b = bianchi_check(r0, r1, grid);
  r["bianchi_norm"] = b.commutator_norm;
  r["bianchi_at"] = {b.where[0], b.where[1]};
  r["wedge_norm"] = b.wedge_norm;
  r["r_relation_residual"] = b.max_relation;
  r["r_symmetry_residual"] = b.max_symmetry;
  if (!(b.commutator_norm < s.tol.bianchi)) {
    throw BianchiViolation(fmt::format("r-operators do not commute: |[r0, r1]| = {:.3e} at ({}, {})",
                                       b.commutator_norm, b.where[0], b.where[1]),
                           b.commutator_norm);
  }
  add_check(checks, "bianchi", b.commutator_norm, s.tol.bianchi);
  add_check(checks, "r_symmetry", b.max_symmetry, 1e-7);

  json members = json::array();
  for (double theta : s.thetas) {
    json m{{"theta", theta}};
    try {
      DemoulinMember mem = demoulin_tau(fam, theta);
      verify_member(fam, mem);
      m["masked_fraction"] = mem.masked_fraction;
      m["nonregular"] = mem.nonregular;
      m["max_dalpha"] = mem.max_dalpha;
      m["max_alpha"] = mem.max_alpha;
      m["ribaucour"] = mem.ribaucour;
    } catch (const FullyMasked& e) {
      m["masked_fraction"] = e.masked_fraction;
      m["ribaucour"] = false;
      m["error"] = e.what();
    }
    add_flag(checks, fmt::format("member_ribaucour theta={}", theta), m["ribaucour"].get<bool>(),
             m.value("max_dalpha", std::numeric_limits<double>::quiet_NaN()));
    members.push_back(m);
  }
  r["members"] = members;

  const DemoulinMember first = demoulin_tau(fam, 0.0);
  const DemoulinMember last = demoulin_tau(fam, std::numbers::pi / 2.0);
  bool endpoints_ok = true;
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const std::size_t k = grid.index(i, j);
      endpoints_ok = endpoints_ok && first.tau(i, j) == fam.tau0[k].value && last.tau(i, j) == fam.tau1[k].value;
    }
  }
  r["endpoints_ok"] = endpoints_ok;
  add_flag(checks, "endpoints", endpoints_ok, endpoints_ok ? 0.0 : 1.0);

  const ParallelSections ps = parallel_sections(fam);
  r["parallel_residual"] = ps.residual;
  add_check(checks, "parallel_sections", ps.residual, s.tol.parallel);

  if (s.dual) {
    const Grid patch(s.dual->patch, s.dual->grid[0], s.dual->grid[1]);
    json d;
    try {
      const DualFamilyResult res = dual_family_step(s.chart, t0, t1, patch, s.tol, {s.dual->initial_offset, {0, 0}});
      d = {{"consistency", res.consistency},
           {"gamma_identity_residual", res.gamma_identity_residual},
           {"gamma_identity_circulation", res.gamma_identity_circulation},
           {"patch", {{"u", {s.dual->patch.u0, s.dual->patch.u1}}, {"v", {s.dual->patch.v0, s.dual->patch.v1}}}},
           {"grid", {s.dual->grid[0], s.dual->grid[1]}}};
      add_check(checks, "dual_consistency", res.consistency, s.tol.dual_consistency);
      add_check(checks, "gamma_identity", res.gamma_identity_residual, s.tol.gamma_identity);
    } catch (const Error& e) {
      d = {{"error", fmt::format("{}: {}", error_name(e), e.what())}};
      add_flag(checks, "dual_family", false, std::numeric_limits<double>::quiet_NaN());
    }
    r["dual"] = d;
  }

  json written = json::array();
  const bool flip = s.pole_flip || opts.pole_flip;
  for (const OutputRequest& o : s.outputs) {
    if (o.kind != "obj" && o.kind != "csv") continue;
    const TauSampler src = o.theta ? member_sampler(fam, *o.theta) : t0;
    const SweepReport rep = sweep(s.chart, src, grid, s.tol);
    const auto p = artifact_path(opts, o.path);
    if (o.kind == "obj") {
      const bool hat = o.surface == "f_hat";
      written.push_back(write_mesh(grid, rep, hat, flip, p, mesh_comment(s, hat, o.theta)));
    } else {
      write_file(p, to_csv(rep));
      written.push_back({{"kind", "csv"}, {"path", p.generic_string()}, {"rows", rep.points.size()}});
    }
  }
  r["artifacts"] = written;
  r["checks"] = checks;
  r["pass"] = all_pass(checks);
  return {r["pass"].get<bool>() ? kPass : kFail, r};
}

Outcome cmd_oracle(const Scene& s, const Options&) {
  std::vector<OracleCase> cases;
  if (s.tau) {
    const Grid g = scene_grid(s);
    cases.push_back({s.chart, s.tau->ast, g.point(g.nu / 3, g.nv / 3)});
  }
  for (OracleCase& c : random_oracle_cases(s.oracle.seed, s.oracle.cases)) cases.push_back(std::move(c));
  json r{{"command", "oracle"}, {"seed", s.oracle.seed}, {"steps", kOracleSteps}};
  json list = json::array(), checks = json::array();
  int n = 0;
  for (const OracleCase& c : cases) {
    const OracleResult o = oracle_convergence(c);
    const bool ok = std::abs(o.first_order - 2.0) <= 0.3 && std::abs(o.second_order - 2.0) <= 0.3;
    list.push_back({{"chart", chart_to_json(c.chart)},
                    {"tau_src", print_expr(c.tau)},
                    {"point", {c.point[0], c.point[1]}},
                    {"first_errors", o.first_errors},
                    {"second_errors", o.second_errors},
                    {"first_order", o.first_order},
                    {"second_order", o.second_order},
                    {"transform_checked", o.transform_checked},
                    {"pass", ok}});
    add_flag(checks, fmt::format("order case {}", n++), ok, std::min(o.first_order, o.second_order));
  }
  r["cases"] = list;
  r["checks"] = checks;
  r["pass"] = all_pass(checks);
  return {r["pass"].get<bool>() ? kPass : kFail, r};
}

int run_command(const std::string& name, const Options& opts, std::ostream& out, std::ostream& err) {
  Outcome res;
  try {
    const bool needs_tau = name != "oracle";
    Scene scene;
    if (!opts.scene_path.empty()) {
      scene = load_scene(opts.scene_path, needs_tau);
    } else if (needs_tau) {
      throw SceneError("--scene is required for '" + name + "'");
    }
    if (opts.grid) scene.grid = *opts.grid;
    if (opts.thetas) scene.thetas = *opts.thetas;
    if (name == "check") {
      res = cmd_check(scene, opts);
    } else if (name == "transform") {
      res = cmd_transform(scene, opts);
    } else if (name == "demoulin") {
      res = cmd_demoulin(scene, opts);
    } else if (name == "oracle") {
      res = cmd_oracle(scene, opts);
    } else if (name == "export") {
      res = cmd_export(scene, opts);
    } else {
      throw SceneError("unknown command '" + name + "'");
    }
    write_json_outputs(scene, opts, res.report);
  } catch (const std::exception& e) {
    const bool input = is_input_error(e);
    res.exit_code = input ? kInputError : kFail;
    res.report = {{"command", name}, {"error", error_name(e)}, {"message", e.what()}, {"pass", false}};
    if (const auto* nr = dynamic_cast<const NotRegular*>(&e)) res.report["where"] = {nr->where[0], nr->where[1]};
    if (!opts.json) fmt::print(err, "{}: {}\n", error_name(e), e.what());
  }
  if (!opts.out_dir.empty() && res.exit_code != kInputError) {
    try {
      write_file(std::filesystem::path(opts.out_dir) / (name + ".json"), res.report.dump(2) + "\n");
    } catch (const std::exception& e) {
      fmt::print(err, "{}\n", e.what());
      return kInputError;
    }
  }
  if (opts.json) {
    out << res.report.dump(2) << "\n";
  } else if (res.report.contains("checks")) {
    for (const json& c : res.report["checks"]) {
      const bool ok = c["pass"].get<bool>();
      std::string line = fmt::format("{} {}", ok ? "PASS" : "FAIL", c["name"].get<std::string>());
      if (c.contains("value") && c["value"].is_number()) line += fmt::format(" {:.3e}", c["value"].get<double>());
      if (c.contains("tolerance")) line += fmt::format(" (< {:.1e})", c["tolerance"].get<double>());
      out << line << "\n";
    }
    if (res.report.contains("nonregular_at")) {
      out << fmt::format("NotRegular: {} grid points, first at (u, v) = ({:.6f}, {:.6f})\n",
                         res.report["nonregular_count"].get<int>(), res.report["nonregular_at"][0].get<double>(),
                         res.report["nonregular_at"][1].get<double>());
    } else if (res.report.contains("max_dalpha_at") && !res.report.value("ribaucour", true)) {
      out << fmt::format("max |d alpha| = {:.3e} at (u, v) = ({:.6f}, {:.6f})\n",
                         res.report["max_dalpha"].get<double>(), res.report["max_dalpha_at"][0].get<double>(),
                         res.report["max_dalpha_at"][1].get<double>());
    }
    if (res.report.contains("artifacts")) {
      for (const json& a : res.report["artifacts"]) {
        out << "wrote " << a["path"].get<std::string>() << "\n";
        if (a.contains("warning")) err << "warning: " << a["warning"].get<std::string>() << "\n";
      }
    }
    out << name << ": " << (res.exit_code == kPass ? "PASS" : "FAIL") << "\n";
  }
  return res.exit_code;
}

}  // namespace ribau::cli
