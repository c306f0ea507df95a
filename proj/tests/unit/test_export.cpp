#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ribau/export.hpp"
#include "ribau/oracle.hpp"

namespace ribau {
namespace {

const ChartSpec& torus() {
  static const ChartSpec t = ChartSpec::clifford_torus(std::numbers::sqrt2 / 2.0);
  return t;
}

TEST(Mesh, PeriodicTorusCounts) {
  const Grid grid(Domain::torus(), 8, 8);
  const auto rep = sweep(torus(), tau_sampler(parse_expr("0.3*sin(u)")), grid);
  const MeshExport mesh = build_mesh(grid, surface_points(rep, false));
  EXPECT_EQ(mesh.vertices.size(), 64u);
  EXPECT_EQ(mesh.faces.size(), 64u);
  EXPECT_EQ(mesh.clipped, 0);
  const MeshExport back = parse_obj(to_obj(mesh, "torus"));
  EXPECT_EQ(back.vertices.size(), 64u);
  EXPECT_EQ(back.faces, mesh.faces);
}

TEST(Mesh, PatchCounts) {
  const Grid grid(Domain::patch(0.2, 1.0, 0.2, 1.0), 5, 4);
  const auto rep = sweep(torus(), tau_sampler(parse_expr("0")), grid);
  const MeshExport mesh = build_mesh(grid, surface_points(rep, true));
  EXPECT_EQ(mesh.vertices.size(), 20u);
  EXPECT_EQ(mesh.faces.size(), 12u);
}

TEST(Mesh, RoundTripIsBitIdentical) {
  const Grid grid(Domain::torus(), 12, 10);
  const auto rep = sweep(ChartSpec::clifford_torus(0.6), tau_sampler(parse_expr("0.1*cos(v)")), grid);
  const MeshExport mesh = build_mesh(grid, surface_points(rep, true));
  const MeshExport back = parse_obj(to_obj(mesh));
  ASSERT_EQ(back.vertices.size(), mesh.vertices.size());
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) EXPECT_EQ(back.vertices[k], mesh.vertices[k]);
}

TEST(Mesh, AntipodalImage) {
  const Grid grid(Domain::torus(), 8, 8);
  const auto rep = sweep(torus(), tau_sampler(parse_expr("0")), grid);
  const auto f = surface_points(rep, false), fh = surface_points(rep, true);
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(fh[k][c], -f[k][c], 1e-15);
    // pi(-x) = -pi(x) / |pi(x)|^2 on S^3
    const auto p = stereographic(f[k]), q = stereographic(fh[k]);
    const double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(q[c], -p[c] / n2, 1e-12);
  }
}

TEST(Mesh, PolePointsAreClipped) {
  const Grid grid(Domain::torus(), 2, 2);
  std::vector<std::array<double, 4>> pts(4, {1.0, 0.0, 0.0, 0.0});
  pts[1] = {0.0, 0.0, 0.0, 1.0};
  pts[2] = {0.0, 0.0, 0.0, -1.0};
  const MeshExport up = build_mesh(grid, pts);
  EXPECT_EQ(up.clipped, 1);
  EXPECT_FALSE(up.warning.empty());
  EXPECT_EQ(up.vertices.size(), 3u);
  EXPECT_TRUE(up.faces.empty());
  const MeshExport down = build_mesh(grid, pts, true);
  EXPECT_EQ(down.clipped, 1);
  EXPECT_EQ(down.source, (std::vector<std::size_t>{0, 1, 3}));
}

TEST(Mesh, ScalarsFollowSurvivingVertices) {
  const Grid grid(Domain::torus(), 2, 2);
  std::vector<std::array<double, 4>> pts(4, {1.0, 0.0, 0.0, 0.0});
  pts[2] = {0.0, 0.0, 0.0, 1.0};
  MeshExport mesh = build_mesh(grid, pts);
  const std::vector<double> s{10, 11, 12, 13};
  add_scalar(mesh, "tau", s);
  EXPECT_EQ(mesh.scalars[0], (std::vector<double>{10, 11, 13}));
}

TEST(Obj, RejectsMalformedInput) {
  EXPECT_THROW(parse_obj("v 1 2\n"), Error);
  EXPECT_THROW(parse_obj("v 1 2 3\nf 1 1 1 2\n"), Error);
  EXPECT_THROW(parse_obj("vt 0 0\n"), Error);
  EXPECT_THROW(parse_obj("v 1 2 x\n"), Error);
  EXPECT_NO_THROW(parse_obj("# c\n\nv 1 2 3\nf 1/1 1 1 1\n"));
}

TEST(Csv, ParallelTransformConstants) {
  const Grid grid(Domain::torus(), 4, 4);
  const std::string csv = to_csv(sweep(torus(), tau_sampler(parse_expr("2")), grid));
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 17u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "u,v,regular,tau,a,b,mu2,alpha_u,alpha_v,dalpha,res_hat_frame,res_pair,res_reconstruction,"
            "res_alpha_sum,res_involution,res_curvature");
  const auto rep = sweep(torus(), tau_sampler(parse_expr("2")), grid);
  for (const auto& p : rep.points) {
    EXPECT_NEAR(p.a, 0.6, 1e-15);
    EXPECT_NEAR(p.b, -0.8, 1e-15);
  }
}

TEST(Output, Deterministic) {
  const Grid grid(Domain::torus(), 16, 16);
  auto render = [&] {
    const auto rep = sweep(torus(), tau_sampler(parse_expr("0.2*sin(u)+0.1*cos(v)")), grid);
    return to_obj(build_mesh(grid, surface_points(rep, true))) + to_csv(rep);
  };
  EXPECT_EQ(render(), render());
}

TEST(Oracle, RandomCasesConvergeAtSecondOrder) {
  for (const OracleCase& c : random_oracle_cases(20240601, 20)) {
    const OracleResult r = oracle_convergence(c);
    EXPECT_NEAR(r.first_order, 2.0, 0.3) << print_expr(c.tau);
    EXPECT_NEAR(r.second_order, 2.0, 0.3) << print_expr(c.tau);
  }
}

TEST(Oracle, CasesAreReproducible) {
  const auto a = random_oracle_cases(5, 4), b = random_oracle_cases(5, 4);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(a[k].tau, b[k].tau);
    EXPECT_EQ(a[k].point, b[k].point);
  }
}

}  // namespace
}  // namespace ribau
