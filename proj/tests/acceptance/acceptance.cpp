// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ribau/demoulin.hpp"
#include "ribau/export.hpp"
#include "ribau/oracle.hpp"

namespace {

using namespace ribau;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

constexpr double kR = std::numbers::sqrt2 / 2.0;
const std::vector<std::string> kTaus{"0", "2", "0.3*sin(u)", "0.1*cos(v)", "0.2*sin(u)+0.1*cos(v)"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

TauSampler tau_of(const std::string& text) { return tau_sampler(parse_expr(text)); }

Grid torus_grid(int n) { return Grid(Domain::torus(), n, n); }

Outcome frame_certification() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double r : {0.5, kR, 0.8}) {
    const ChartSpec chart = ChartSpec::clifford_torus(r);
    const Grid grid = torus_grid(64);
    for (int i = 0; i < grid.nu; ++i)
      for (int j = 0; j < grid.nv; ++j)
        worst = std::max(worst, eval_chart(chart, grid.point(i, j)).certificate.max_residual());
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 1.0, fmt::format("max contact residual {:.2e} (< 1e-12), {:.3f} s (< 1 s)", worst, secs)};
}

// Sweeps shared by the identity criteria.
struct SweepCache {
  std::vector<SweepReport> torus;  // kTaus on the 1/sqrt2 torus, 64x64
  double seconds = 0.0;
};

const SweepCache& sweeps() {
  static const SweepCache cache = [] {
    SweepCache c;
    const auto t0 = Clock::now();
    const ChartSpec chart = ChartSpec::clifford_torus(kR);
    for (const auto& t : kTaus) c.torus.push_back(sweep(chart, tau_of(t), torus_grid(64)));
    c.seconds = seconds_since(t0);
    return c;
  }();
  return cache;
}

Outcome hat_frame_identities() {
  const SweepCache& c = sweeps();
  double worst = 0.0;
  bool regular = true;
  for (const auto& rep : c.torus) {
    worst = std::max(worst, rep.maxima.hat_frame);
    regular = regular && rep.regular;
  }
  return {worst < 1e-9 && regular && c.seconds < 5.0,
          fmt::format("max hat-frame residual {:.2e} (< 1e-9) over {} functions, {:.2f} s (< 5 s)", worst,
                      kTaus.size(), c.seconds)};
}

Outcome involution() {
  double inv = 0.0, rec = 0.0;
  for (const auto& rep : sweeps().torus) {
    inv = std::max(inv, rep.maxima.involution);
    rec = std::max(rec, rep.maxima.reconstruction);
  }
  return {inv < 1e-8 && rec < 1e-9,
          fmt::format("frame discrepancy {:.2e} (< 1e-8), fcheckhat residual and |fcheckhat| = mu {:.2e} (< 1e-9)", inv,
                      rec)};
}

Outcome dual_path_fcheck() {
  double worst = 0.0;
  int points = 0;
  for (double r : {0.5, 0.6, kR, 0.8}) {
    const ChartSpec chart = ChartSpec::clifford_torus(r);
    for (const auto& t : kTaus) {
      if (t == "0" || t == "2") continue;
      const auto rep = sweep(chart, tau_of(t), torus_grid(32));
      for (const auto& p : rep.points) {
        if (!p.regular) continue;
        worst = std::max(worst, std::isnan(p.shape_path) ? INFINITY : p.shape_path);
        ++points;
      }
    }
  }
  return {worst < 1e-10, fmt::format("max |fcheck difference| {:.2e} (< 1e-10) at {} points, radii 0.5 0.6 0.7071 0.8",
                                     worst, points)};
}

Outcome classification() {
  const ChartSpec chart = ChartSpec::clifford_torus(kR);
  bool pass = true;
  std::string detail;
  for (int n : {32, 64, 128}) {
    const auto good = ribaucour_residual(chart, tau_of("0.3*sin(u)"), torus_grid(n));
    const auto bad = sweep(chart, tau_of("sin(u)*sin(v)"), torus_grid(n));
    pass = pass && good.max_dalpha < 1e-10 && good.ribaucour && bad.max_dalpha > 1e-2 && !bad.ribaucour;
    detail += fmt::format("{}{}: {:.1e} / {:.1e}", detail.empty() ? "" : ", ", n, good.max_dalpha, bad.max_dalpha);
  }
  return {pass, "max|dalpha| sin u / sin u sin v at " + detail};
}

Outcome identity_suite() {
  SweepMaxima m;
  std::vector<const SweepReport*> reps;
  for (const auto& r : sweeps().torus) reps.push_back(&r);
  const SweepReport extra = sweep(ChartSpec::clifford_torus(kR), tau_of("sin(u)*sin(v)"), torus_grid(64));
  reps.push_back(&extra);
  for (const SweepReport* r : reps) {
    m.alpha_sum = std::max(m.alpha_sum, r->maxima.alpha_sum);
    m.pair = std::max(m.pair, r->maxima.pair);
    m.curvature = std::max(m.curvature, r->maxima.curvature);
  }
  return {m.alpha_sum < 1e-8 && m.pair < 1e-9 && m.curvature < 1e-8,
          fmt::format("alpha sum {:.2e} (< 1e-8), pair {:.2e} (< 1e-9), curvature {:.2e} (< 1e-8); "
                      "includes sin(u)*sin(v)",
                      m.alpha_sum, m.pair, m.curvature)};
}

Outcome potential() {
  const Grid grid = torus_grid(128);
  const auto rep = sweep(ChartSpec::clifford_torus(kR), tau_of("0.3*sin(u)"), grid);
  const Potential p = integrate_potential(rep.alpha_form());
  const double shift = std::log(1 + 0.3 * std::sin(grid.u(0)));
  double dev = 0.0;
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j)
      dev = std::max(dev, std::abs(p.values(i, j) - std::log(1 + 0.3 * std::sin(grid.u(i))) + shift));
  return {dev < 1e-6 && p.loop_residual < 1e-8 && p.period_residual < 1e-8,
          fmt::format("deviation {:.2e} (< 1e-6), loop {:.2e}, period {:.2e} (< 1e-8)", dev, p.loop_residual,
                      p.period_residual)};
}

Outcome bianchi_demoulin() {
  const auto t0 = Clock::now();
  const ChartSpec chart = ChartSpec::clifford_torus(kR);
  const Grid grid = torus_grid(64);
  const auto tau0 = tau_of("0.3*sin(u)"), tau1 = tau_of("2");
  const auto r0 = r_operator_field(chart, tau0, grid), r1 = r_operator_field(chart, tau1, grid);
  const double comm = bianchi_check(r0, r1, grid).commutator_norm;
  const DemoulinFamily fam = make_demoulin_family(chart, tau0, tau1, grid);
  double dalpha = 0.0;
  bool closed = true;
  for (int k = 0; k < 8; ++k) {
    DemoulinMember m = demoulin_tau(fam, k * pi / 8);
    verify_member(fam, m);
    dalpha = std::max(dalpha, m.max_dalpha);
    closed = closed && m.max_dalpha < 1e-7;
  }
  bool endpoints = true;
  const DemoulinMember e0 = demoulin_tau(fam, 0.0), e1 = demoulin_tau(fam, pi / 2);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const std::size_t k = grid.index(i, j);
      endpoints = endpoints && e0.tau(i, j) == fam.tau0[k].value && e1.tau(i, j) == fam.tau1[k].value;
    }
  }
  const double parallel = parallel_sections(fam).residual;
  const double secs = seconds_since(t0);
  return {comm < 1e-8 && closed && endpoints && parallel < 1e-7 && secs < 30.0,
          fmt::format("commutator {:.2e} (< 1e-8), member max|dalpha| {:.2e} (< 1e-7), endpoints {}, parallel "
                      "sections {:.2e} (< 1e-7), {:.2f} s (< 30 s)",
                      comm, dalpha, endpoints ? "exact" : "differ", parallel, secs)};
}

Outcome dual_family() {
  const Grid patch(Domain::patch(0.1, 2 * pi - 0.1, 0.1, 2 * pi - 0.1), 64, 64);
  const auto res = dual_family_step(ChartSpec::clifford_torus(kR), tau_of("0.3*sin(u)"), tau_of("2"), patch);
  return {res.consistency < 1e-5 && res.gamma_identity_residual < 1e-5,
          fmt::format("row/column agreement {:.2e} (< 1e-5), d((tau0 - tauhat0) gamma) {:.2e} (< 1e-5)",
                      res.consistency, res.gamma_identity_residual)};
}

Outcome oracle() {
  double lo = INFINITY, hi = -INFINITY;
  for (const OracleCase& c : random_oracle_cases(20240601, 20)) {
    const OracleResult r = oracle_convergence(c);
    lo = std::min({lo, r.first_order, r.second_order});
    hi = std::max({hi, r.first_order, r.second_order});
  }
  return {lo >= 1.7 && hi <= 2.3, fmt::format("orders in [{:.3f}, {:.3f}] (2.0 +- 0.3), 20 cases", lo, hi)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "ribau_acceptance";
  fs::remove_all(root);
  const std::string scene = std::string(RIBAU_SCENES_DIR) + "/torus_sin_u.json";
  const std::vector<std::string> files{"f.obj", "f_hat.obj", "fields.csv", "transform.json"};
  std::vector<std::string> first;
  bool same = true;
  for (int run = 0; run < 2; ++run) {
    cli::Options o;
    o.scene_path = scene;
    o.out_dir = root.string();
    std::ostringstream out, err;
    if (cli::run_command("transform", o, out, err) != cli::kPass) return {false, "transform run failed: " + err.str()};
    for (std::size_t k = 0; k < files.size(); ++k) {
      std::string text = slurp(root / files[k]);
      fs::remove(root / files[k]);
      if (run == 0) {
        same = same && !text.empty();
        first.push_back(std::move(text));
      } else {
        same = same && text == first[k];
      }
    }
  }
  const Grid grid = torus_grid(8);
  const auto rep = sweep(ChartSpec::clifford_torus(kR), tau_of("0.3*sin(u)"), grid);
  const MeshExport back = parse_obj(to_obj(build_mesh(grid, surface_points(rep, true))));
  const bool counts = back.vertices.size() == 64 && back.faces.size() == 64;
  fs::remove_all(root);
  return {same && counts, fmt::format("OBJ/CSV/JSON {}, 8x8 torus re-parsed to {} vertices, {} quads",
                                      same ? "byte-identical" : "differ", back.vertices.size(), back.faces.size())};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"frame certification", frame_certification},
      {"hat-frame identities", hat_frame_identities},
      {"involution", involution},
      {"dual-path fcheck", dual_path_fcheck},
      {"Ribaucour classification", classification},
      {"identity suite", identity_suite},
      {"potential", potential},
      {"Bianchi and Demoulin family", bianchi_demoulin},
      {"dual family", dual_family},
      {"oracle convergence", oracle},
      {"determinism and formats", determinism},
  };
  int failures = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    fmt::print("{} {:2d} {}: {}\n", o.pass ? "PASS" : "FAIL", ++k, name, o.detail);
  }
  const double total = seconds_since(start);
  const bool fast = total < 60.0;
  failures += !fast;
  fmt::print("{} {:2d} wall time: {:.2f} s (< 60 s)\n", fast ? "PASS" : "FAIL", ++k, total);
  return failures == 0 ? 0 : 1;
}
