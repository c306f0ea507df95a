#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ribau/charts.hpp"
#include "ribau/grid.hpp"
#include "ribau/ribaucour.hpp"
#include "ribau/sweep.hpp"

namespace ribau {
namespace {

using std::numbers::pi;
using J = Jet<2>;
constexpr double kR = std::numbers::sqrt2 / 2.0;

const ChartSpec& torus() {
  static const ChartSpec t = ChartSpec::clifford_torus(kR);
  return t;
}

J tau_jet(const char* text, std::array<double, 2> p) { return evaluate_jet(parse_expr(text), p[0], p[1]); }

// -dxi + tau df from central differences of the chart values.
std::array<std::array<double, 4>, 2> fd_columns(const ChartSpec& chart, std::array<double, 2> p, double tau) {
  const double h = 1e-5;
  std::array<std::array<double, 4>, 2> cols{};
  for (int i = 0; i < 2; ++i) {
    std::array<double, 2> hi = p, lo = p;
    hi[i] += h;
    lo[i] -= h;
    const auto [fp, xp] = chart_values(chart, hi[0], hi[1]);
    const auto [fm, xm] = chart_values(chart, lo[0], lo[1]);
    for (int k = 0; k < 4; ++k) cols[i][k] = (tau * (fp[k] - fm[k]) - (xp[k] - xm[k])) / (2 * h);
  }
  return cols;
}

TEST(MinusMetric, HalfIdentityAtZeroTau) {
  const auto g = minus_metric(eval_chart(torus(), {0.4, 1.3}), J::constant(0.0));
  EXPECT_NEAR(g.gram(0, 0).value, 0.5, 1e-15);
  EXPECT_NEAR(g.gram(1, 1).value, 0.5, 1e-15);
  EXPECT_NEAR(g.gram(0, 1).value, 0.0, 1e-15);
}

TEST(MinusMetric, PrincipalFrameFormula) {
  for (double tau : {-0.4, 0.3, 2.0}) {
    const std::array<double, 2> p{1.2, 2.9};
    const auto g = minus_metric(eval_chart(torus(), p), J::constant(tau));
    EXPECT_NEAR(g.gram(0, 0).value, (1 + tau) * (1 + tau) / 2, 1e-14);
    EXPECT_NEAR(g.gram(1, 1).value, (tau - 1) * (tau - 1) / 2, 1e-14);
    const auto cols = fd_columns(torus(), p, tau);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double fd = 0.0;
        for (int k = 0; k < 4; ++k) fd += cols[i][k] * cols[j][k];
        EXPECT_NEAR(g.gram(i, j).value, fd, 1e-8);
      }
    }
  }
}

TEST(Transform, UnitTauIsSingular) {
  for (auto p : {std::array<double, 2>{0.0, 0.0}, {1.0, 2.0}, {4.0, 5.5}}) {
    EXPECT_THROW(transform(eval_chart(torus(), p), J::constant(1.0)), NotRegular);
  }
}

TEST(Transform, ZeroTauIsAntipode) {
  const auto frame = eval_chart(ChartSpec::clifford_torus(0.6), {0.7, 2.2});
  const auto r = transform(frame, J::constant(0.0));
  EXPECT_EQ(r.a.value, -1.0);
  EXPECT_EQ(r.b.value, 0.0);
  EXPECT_EQ(r.mu2.value, 0.0);
  EXPECT_EQ(max_abs(values(r.f_check)), 0.0);
  EXPECT_LT(max_abs(values(r.f_hat) + values(frame.f)), 1e-15);
  EXPECT_LT(max_abs(values(r.xi_hat) - values(frame.xi)), 1e-15);
  for (const J& a : r.alpha) EXPECT_EQ(a.value, 0.0);
}

TEST(Transform, ConstantTauIsParallel) {
  const auto frame = eval_chart(torus(), {0.3, 1.1});
  for (double c : {2.0, -0.5, 3.7}) {
    const auto r = transform(frame, J::constant(c));
    const LieVector<2> expect = (1.0 / (c * c + 1)) * ((c * c - 1) * values(frame.f) - 2 * c * values(frame.xi));
    EXPECT_LT(max_abs(values(r.f_hat) - expect), 1e-15);
    EXPECT_NEAR(lie_inner(values(r.f_hat), values(r.f_hat)), 1.0, 1e-15);
    EXPECT_EQ(r.max_abs_dalpha(), 0.0);
  }
  const auto r2 = transform(frame, J::constant(2.0));
  EXPECT_NEAR(r2.a.value, 0.6, 1e-15);
  EXPECT_NEAR(r2.b.value, -0.8, 1e-15);
}

TEST(Transform, AlphaOfUOnlyTau) {
  const std::array<double, 2> p{pi / 3, 0.4};
  const auto r = transform(eval_chart(torus(), p), tau_jet("0.3*sin(u)", p));
  const double tau = 0.3 * std::sin(p[0]);
  EXPECT_NEAR(r.alpha[0].value, -0.3 * std::cos(p[0]) / (1 + tau), 1e-14);
  EXPECT_NEAR(r.alpha[1].value, 0.0, 1e-15);
  const J fd = fd_jet_oracle([](const std::array<double, 2>& q) { return -std::log(1 + 0.3 * std::sin(q[0])); }, p, 1e-4);
  EXPECT_NEAR(r.alpha[0].value, fd.d(0), 1e-6);
  EXPECT_NEAR(r.alpha[1].value, fd.d(1), 1e-6);
}

TEST(Transform, HatFrameResiduals) {
  for (const char* text : {"0.3*sin(u)", "0.1*cos(v)", "sin(u)*sin(v)"}) {
    const std::array<double, 2> p{0.9, 2.4};
    const auto r = transform(eval_chart(torus(), p), tau_jet(text, p));
    EXPECT_LT(r.residuals.max(), 1e-12) << text;
  }
}

TEST(Reconstruct, DoubleAntipode) {
  const auto frame = eval_chart(torus(), {0.3, 1.1});
  const auto r = transform(frame, J::constant(0.0));
  const auto rec = reconstruct(frame, r);
  EXPECT_EQ(rec.involution, 0.0);
}

TEST(Reconstruct, InvolutionOnUOnlyTau) {
  const Grid grid(Domain::torus(), 32, 32);
  const auto report = sweep(torus(), tau_sampler(parse_expr("0.3*sin(u)")), grid);
  EXPECT_TRUE(report.regular);
  EXPECT_LT(report.maxima.involution, 1e-9);
  EXPECT_LT(report.maxima.reconstruction, 1e-9);
}

TEST(Closedness, ConstantTauHasZeroAlpha) {
  const auto res = ribaucour_residual(torus(), tau_sampler(parse_expr("2")), Grid(Domain::torus(), 16, 16));
  EXPECT_EQ(res.max_dalpha, 0.0);
  EXPECT_EQ(res.max_alpha, 0.0);
  EXPECT_TRUE(res.ribaucour);
}

TEST(Closedness, Classification) {
  const Grid grid(Domain::torus(), 64, 64);
  const auto good = ribaucour_residual(torus(), tau_sampler(parse_expr("0.3*sin(u)")), grid);
  EXPECT_LT(good.max_dalpha, 1e-10);
  EXPECT_TRUE(good.ribaucour);
  const auto bad = ribaucour_residual(torus(), tau_sampler(parse_expr("sin(u)*sin(v)")), grid);
  EXPECT_GT(bad.max_dalpha, 1e-2);
  EXPECT_FALSE(bad.ribaucour);
}

TEST(Closedness, SingularTauThrows) {
  EXPECT_THROW(ribaucour_residual(torus(), tau_sampler(parse_expr("1")), Grid(Domain::torus(), 8, 8)), NotRegular);
}

TEST(ShapeOperatorPath, ConstantTauGivesZero) {
  const auto frame = eval_chart(torus(), {0.3, 1.1});
  EXPECT_EQ(max_abs(values(shape_operator_path(frame, J::constant(0.5)))), 0.0);
}

TEST(ShapeOperatorPath, AgreesWithMetricPath) {
  struct Case {
    double r;
    const char* tau;
  };
  for (const Case& c : {Case{kR, "0.3*sin(u)"}, Case{0.6, "0.1*cos(v)"}, Case{0.6, "0.2*sin(u)+0.1*cos(v)"}}) {
    const ChartSpec chart = ChartSpec::clifford_torus(c.r);
    for (auto p : {std::array<double, 2>{0.3, 1.1}, {2.5, 4.0}, {5.0, 0.2}}) {
      const auto frame = eval_chart(chart, p);
      const J tau = tau_jet(c.tau, p);
      const auto r = transform(frame, tau);
      EXPECT_LT(max_abs(values(shape_operator_path(frame, tau)) - values(r.f_check)), 1e-10) << c.tau;
    }
  }
}

TEST(CurvatureIdentity, ConstantTauBothSidesVanish) {
  const auto frame = eval_chart(torus(), {0.3, 1.1});
  const auto c = curvature_identity(frame, transform(frame, J::constant(2.0)));
  EXPECT_LT(std::abs(c.wedge[0]), 1e-15);
  EXPECT_EQ(c.rhs[0], 0.0);
}

TEST(CurvatureIdentity, HoldsOffTheRibaucourLocus) {
  const std::array<double, 2> p{1.0, 0.7};
  const auto frame = eval_chart(torus(), p);
  const auto c = curvature_identity(frame, transform(frame, tau_jet("sin(u)*sin(v)", p)));
  EXPECT_GT(std::abs(c.rhs[0]), 1e-2);
  EXPECT_LT(std::abs(c.wedge[0] - c.rhs[0]) / std::abs(c.rhs[0]), 1e-6);
  EXPECT_LT(c.alpha_sum, 1e-12);
}

TEST(Sweep, IdentityResidualsOnGrid) {
  const auto report = sweep(torus(), tau_sampler(parse_expr("0.3*sin(u)")), Grid(Domain::torus(), 32, 32));
  EXPECT_LT(report.maxima.curvature, 1e-8);
  EXPECT_LT(report.maxima.pair, 1e-9);
  EXPECT_LT(report.maxima.alpha_sum, 1e-8);
  EXPECT_LT(report.maxima.hat_frame, 1e-9);
}

TEST(Sweep, CountsNonRegularPoints) {
  const auto report = sweep(torus(), tau_sampler(parse_expr("1")), Grid(Domain::torus(), 8, 8));
  EXPECT_FALSE(report.regular);
  EXPECT_EQ(report.nonregular_count, 64);
}

}  // namespace
}  // namespace ribau
