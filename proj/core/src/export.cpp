#include "ribau/export.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <limits>

#include "ribau/errors.hpp"

namespace ribau {

std::array<double, 3> stereographic(const std::array<double, 4>& x, bool pole_flip) {
  const double d = pole_flip ? 1.0 + x[3] : 1.0 - x[3];
  return {x[0] / d, x[1] / d, x[2] / d};
}

MeshExport build_mesh(const Grid& grid, std::span<const std::array<double, 4>> points, bool pole_flip) {
  if (points.size() != grid.size()) throw Error("build_mesh: point count does not match the grid");
  MeshExport mesh;
  std::vector<int> id(grid.size(), -1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& x = points[k];
    const bool finite = std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]) && std::isfinite(x[3]);
    const double height = pole_flip ? -x[3] : x[3];
    if (!finite || height > 1.0 - kPoleClearance) {
      ++mesh.clipped;
      continue;
    }
    id[k] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(stereographic(x, pole_flip));
    mesh.source.push_back(k);
  }
  if (mesh.clipped > 0) {
    mesh.warning = fmt::format("{} grid points clipped near the projection pole or undefined", mesh.clipped);
  }
  const bool pu = grid.domain.periodic_u, pv = grid.domain.periodic_v;
  const int cu = pu ? grid.nu : grid.nu - 1;
  const int cv = pv ? grid.nv : grid.nv - 1;
  for (int i = 0; i < cu; ++i) {
    const int i1 = (i + 1) % grid.nu;
    for (int j = 0; j < cv; ++j) {
      const int j1 = (j + 1) % grid.nv;
      const std::array<int, 4> q{id[grid.index(i, j)], id[grid.index(i1, j)], id[grid.index(i1, j1)],
                                 id[grid.index(i, j1)]};
      if (q[0] >= 0 && q[1] >= 0 && q[2] >= 0 && q[3] >= 0) mesh.faces.push_back(q);
    }
  }
  return mesh;
}

void add_scalar(MeshExport& mesh, std::string name, std::span<const double> per_point) {
  std::vector<double> vals;
  vals.reserve(mesh.source.size());
  for (std::size_t k : mesh.source) vals.push_back(per_point[k]);
  mesh.scalar_names.push_back(std::move(name));
  mesh.scalars.push_back(std::move(vals));
}

std::vector<std::array<double, 4>> surface_points(const SweepReport& report, bool hat) {
  std::vector<std::array<double, 4>> out;
  out.reserve(report.points.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const PointRecord& p : report.points) {
    if (hat && !p.regular) {
      out.push_back({nan, nan, nan, nan});
      continue;
    }
    const LieVector<2>& x = hat ? p.f_hat : p.f;
    out.push_back({x.spatial[0], x.spatial[1], x.spatial[2], x.spatial[3]});
  }
  return out;
}

std::string to_obj(const MeshExport& mesh, std::string_view comment) {
  fmt::memory_buffer out;
  if (!comment.empty()) fmt::format_to(std::back_inserter(out), "# {}\n", comment);
  for (const auto& v : mesh.vertices) fmt::format_to(std::back_inserter(out), "v {} {} {}\n", v[0], v[1], v[2]);
  for (const auto& f : mesh.faces) {
    fmt::format_to(std::back_inserter(out), "f {} {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
  }
  return fmt::to_string(out);
}

namespace {

std::string_view next_token(std::string_view& line) {
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    line = {};
    return {};
  }
  std::size_t e = line.find_first_of(" \t\r", b);
  if (e == std::string_view::npos) e = line.size();
  std::string_view tok = line.substr(b, e - b);
  line.remove_prefix(e);
  return tok;
}

template <class T>
T number(std::string_view tok, int lineno) {
  T x{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw Error(fmt::format("OBJ line {}: bad number '{}'", lineno, tok));
  }
  return x;
}

}  // namespace

MeshExport parse_obj(std::string_view text) {
  MeshExport mesh;
  int lineno = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    const std::string_view kind = next_token(line);
    if (kind.empty() || kind.front() == '#') continue;
    if (kind == "v") {
      std::array<double, 3> v{};
      for (double& c : v) c = number<double>(next_token(line), lineno);
      mesh.vertices.push_back(v);
    } else if (kind == "f") {
      std::array<int, 4> f{};
      for (int& c : f) {
        std::string_view tok = next_token(line);
        tok = tok.substr(0, tok.find('/'));
        c = number<int>(tok, lineno) - 1;
        if (c < 0 || c >= static_cast<int>(mesh.vertices.size())) {
          throw Error(fmt::format("OBJ line {}: face index out of range", lineno));
        }
      }
      mesh.faces.push_back(f);
    } else {
      throw Error(fmt::format("OBJ line {}: unsupported statement '{}'", lineno, kind));
    }
    if (!next_token(line).empty()) throw Error(fmt::format("OBJ line {}: trailing data", lineno));
  }
  return mesh;
}

std::string to_csv(const SweepReport& report) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out),
                 "u,v,regular,tau,a,b,mu2,alpha_u,alpha_v,dalpha,res_hat_frame,res_pair,res_reconstruction,res_alpha_sum,"
                 "res_involution,res_curvature\n");
  for (const PointRecord& p : report.points) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", p.u, p.v,
                   p.regular ? 1 : 0, p.tau, p.a, p.b, p.mu2, p.alpha[0], p.alpha[1], std::abs(p.dalpha),
                   p.hat_frame, p.pair, p.reconstruction, p.alpha_sum, p.involution, p.curvature);
  }
  return fmt::to_string(out);
}

}  // namespace ribau
