#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ribau/charts.hpp"
#include "ribau/expr.hpp"
#include "ribau/grid.hpp"
#include "ribau/lie.hpp"

namespace ribau {
namespace {

using std::numbers::pi;
using J = Jet<2>;
constexpr double kR = std::numbers::sqrt2 / 2.0;

LieVector<2> basis(int k) {
  LieVector<2> e;
  e[k] = 1.0;
  return e;
}

TEST(LieInner, TimeLikeUnit) { EXPECT_EQ(lie_inner(t0<2>(), t0<2>()), -1.0); }

TEST(LieInner, PointSphereIsNull) {
  LieVector<2> f;
  f.spatial = {0.6, 0.0, 0.0, 0.8};
  const LieVector<2> p = f + t0<2>();
  EXPECT_NEAR(lie_inner(p, p), 0.0, 1e-15);
}

TEST(SphereCongruence, ZeroTauIsGreatSphere) {
  const LegendreFrame<2> frame = eval_chart(ChartSpec::clifford_torus(kR), {0.3, 1.1});
  const auto s = sphere_congruence(frame, J::constant(0.0));
  EXPECT_EQ(max_abs(values(s.sigma) - values(frame.great_sphere())), 0.0);
}

TEST(SphereCongruence, UnitTauOnFixedFrame) {
  LegendreFrame<2> frame;
  frame.f = constant_jet(basis(0));
  frame.xi = constant_jet(basis(1));
  const auto s = sphere_congruence(frame, J::constant(1.0));
  const LieVector<2> expect = basis(1) - basis(0) - t0<2>() + t1<2>();
  EXPECT_EQ(max_abs(values(s.sigma) - expect), 0.0);
  EXPECT_EQ(s.null_residual, 0.0);
}

TEST(SphereCongruence, NullOnTorus) {
  const ChartSpec torus = ChartSpec::clifford_torus(kR);
  for (double u : {0.1, 1.7, 4.0}) {
    const auto s = sphere_congruence(eval_chart(torus, {u, 2.0 - u}), J::constant(0.7));
    EXPECT_LT(s.null_residual, 1e-12);
  }
}

TEST(SphereCongruence, SigmaJetMatchesFiniteDifferences) {
  const ChartSpec torus = ChartSpec::clifford_torus(kR);
  const Expr tau = parse_expr("0.3*sin(u)");
  const std::array<double, 2> p{pi / 2.0, 0.9};
  const auto s = sphere_congruence(eval_chart(torus, p), evaluate_jet(tau, p[0], p[1]));
  for (int k = 0; k < LieVector<2>::kSize; ++k) {
    const J fd = fd_jet_oracle(
        [&](const std::array<double, 2>& q) {
          return values(sphere_congruence(eval_chart(torus, q), evaluate_jet(tau, q[0], q[1])).sigma)[k];
        },
        p, 1e-4);
    EXPECT_LT(max_abs_diff(s.sigma[k], fd), 1e-6) << "component " << k;
  }
}

TEST(Charts, CliffordAtOrigin) {
  const auto frame = eval_chart(ChartSpec::clifford_torus(kR), {0.0, 0.0});
  const LieVector<2> f = values(frame.f), xi = values(frame.xi);
  EXPECT_NEAR(f[0], kR, 1e-15);
  EXPECT_NEAR(f[2], kR, 1e-15);
  EXPECT_NEAR(xi[0], -kR, 1e-15);
  EXPECT_NEAR(xi[2], kR, 1e-15);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_EQ(xi[3], 0.0);
}

TEST(Charts, ContactResidualsOnTori) {
  for (double r : {0.5, 0.6, kR, 0.8}) {
    const ChartSpec torus = ChartSpec::clifford_torus(r);
    for (auto p : {std::array<double, 2>{pi, pi / 2.0}, {0.3, 1.1}, {5.9, 0.02}}) {
      EXPECT_LT(eval_chart(torus, p).certificate.max_residual(), 1e-12) << r;
    }
  }
}

TEST(Charts, BrokenFrameIsRejected) {
  const auto good = eval_chart(ChartSpec::clifford_torus(kR), {0.3, 1.1});
  EXPECT_THROW(lift_frame<2>(good.f, good.f, {0.3, 1.1}), ContactViolation);
}

TEST(Charts, CustomMatchesBuiltin) {
  const std::string r = "0.7071067811865476";
  const std::array<Expr, 4> f{parse_expr(r + "*cos(u)"), parse_expr(r + "*sin(u)"), parse_expr(r + "*cos(v)"),
                              parse_expr(r + "*sin(v)")};
  const std::array<Expr, 4> xi{parse_expr("-" + r + "*cos(u)"), parse_expr("-" + r + "*sin(u)"),
                               parse_expr(r + "*cos(v)"), parse_expr(r + "*sin(v)")};
  const ChartSpec custom = ChartSpec::custom(f, xi, Domain::torus());
  const ChartSpec builtin = ChartSpec::clifford_torus(kR);
  for (auto p : {std::array<double, 2>{0.3, 1.1}, {2.0, 4.5}}) {
    const auto a = eval_chart(custom, p), b = eval_chart(builtin, p);
    for (int k = 0; k < LieVector<2>::kSize; ++k) {
      EXPECT_LT(max_abs_diff(a.f[k], b.f[k]), 1e-12);
      EXPECT_LT(max_abs_diff(a.xi[k], b.xi[k]), 1e-12);
    }
  }
}

TEST(Charts, ParallelOfShiftsAlongNormal) {
  const ChartSpec base = ChartSpec::clifford_torus(0.6);
  const ChartSpec par = ChartSpec::parallel_of(base, 0.4);
  const auto a = eval_chart(base, {1.0, 2.0}), b = eval_chart(par, {1.0, 2.0});
  const LieVector<2> expect = std::cos(0.4) * values(a.f) + std::sin(0.4) * values(a.xi);
  EXPECT_LT(max_abs(values(b.f) - expect), 1e-15);
  EXPECT_LT(b.certificate.max_residual(), 1e-12);
}

TEST(Charts, PatchRejectsOutsidePoints) {
  ChartSpec spec = ChartSpec::clifford_torus(kR);
  spec.domain = Domain::patch(0.0, 1.0, 0.0, 1.0);
  EXPECT_NO_THROW(eval_chart(spec, {0.5, 0.5}));
  EXPECT_THROW(eval_chart(spec, {1.5, 0.5}), OutOfDomain);
}

TEST(Expr, ParsesProducts) {
  const Expr e = parse_expr("0.3*sin(u)");
  const Expr expect = Expr::binary(Expr::Kind::Mul, Expr::constant(0.3), Expr::unary(Expr::Kind::Sin, Expr::var_u()));
  EXPECT_EQ(e, expect);
  EXPECT_EQ(parse_expr("2"), Expr::constant(2.0));
}

TEST(Expr, Precedence) {
  using K = Expr::Kind;
  const Expr two = Expr::constant(2.0);
  EXPECT_EQ(parse_expr("-u^2"), Expr::unary(K::Neg, Expr::binary(K::Pow, Expr::var_u(), two)));
  EXPECT_EQ(parse_expr("2^-1"), Expr::binary(K::Pow, two, Expr::unary(K::Neg, Expr::constant(1.0))));
  EXPECT_EQ(parse_expr("u-v-1"),
            Expr::binary(K::Sub, Expr::binary(K::Sub, Expr::var_u(), Expr::var_v()), Expr::constant(1.0)));
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("2^-1"), 0.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse_expr("-u^2"), 3.0, 0.0), -9.0);
}

TEST(Expr, ProductJetMatchesOracle) {
  const Expr e = parse_expr("sin(u)*sin(v)");
  const J jet = evaluate_jet(e, 0.5, 0.5);
  const J fd = fd_jet_oracle([&](const std::array<double, 2>& p) { return evaluate(e, p[0], p[1]); }, {0.5, 0.5}, 1e-4);
  EXPECT_LT(max_abs_diff(jet, fd), 1e-6);
}

TEST(Expr, ErrorsCarryOffset) {
  auto offset = [](std::string_view s) -> long {
    try {
      parse_expr(s);
    } catch (const ParseError& e) {
      EXPECT_FALSE(e.expected.empty());
      return static_cast<long>(e.offset);
    }
    return -1;
  };
  EXPECT_EQ(offset(""), 0);
  EXPECT_EQ(offset("2*"), 2);
  EXPECT_EQ(offset("sin(u"), 5);
  EXPECT_EQ(offset("u + $"), 4);
  EXPECT_EQ(offset("tan(u)"), 0);
  EXPECT_EQ(offset("u^v^2"), 3);
}

TEST(Expr, EvaluationDomainErrors) {
  EXPECT_THROW(evaluate(parse_expr("ln(u)"), -1.0, 0.0), DomainErrorJet);
  EXPECT_THROW(evaluate_jet(parse_expr("1/u"), 0.0, 0.0), DivisionByZeroJet);
}

TEST(Expr, RandomRoundTrip) {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 500; ++n) {
    const Expr e = random_smooth_expr(rng, 4);
    const std::string text = print_expr(e);
    EXPECT_EQ(parse_expr(text), e) << text;
  }
}

}  // namespace
}  // namespace ribau
