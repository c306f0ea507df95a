#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ribau/grid.hpp"
#include "ribau/sweep.hpp"

namespace ribau {
namespace {

using std::numbers::pi;



TEST(GridSampling, PeriodicCellCentresAndNodalPatches) {
  const Grid torus(Domain::torus(), 8, 4);
  EXPECT_DOUBLE_EQ(torus.hu(), 2 * pi / 8);
  EXPECT_DOUBLE_EQ(torus.u(0), pi / 8);
  EXPECT_DOUBLE_EQ(torus.v(3), 2 * pi * 3.5 / 4);
  const Grid patch(Domain::patch(1.0, 2.0, -1.0, 1.0), 5, 3);
  EXPECT_DOUBLE_EQ(patch.hu(), 0.25);
  EXPECT_DOUBLE_EQ(patch.u(4), 2.0);
  EXPECT_DOUBLE_EQ(patch.v(1), 0.0);
}

TEST(FdOracle, ConstantField) {
  const Jet<2> j = fd_jet_oracle([](const std::array<double, 2>&) { return 3.25; }, {0.4, 0.1}, 1e-3);
  EXPECT_EQ(j.value, 3.25);
  for (double g : j.grad) EXPECT_EQ(g, 0.0);
  for (double h : j.hess) EXPECT_EQ(h, 0.0);
}

TEST(FdOracle, SineAtZero) {
  const Jet<2> j = fd_jet_oracle([](const std::array<double, 2>& p) { return std::sin(p[0]); }, {0.0, 0.0}, 1e-3);
  EXPECT_NEAR(j.d(0), 1.0, 1e-6);
  EXPECT_NEAR(j.d2(0, 0), 0.0, 1e-6);
}

TEST(FdOracle, SecondOrderConvergence) {
  const std::array<double, 2> p{0.3, 0.8};
  auto f = [](const std::array<double, 2>& q) { return std::exp(q[0]) * std::cos(q[1]); };
  const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};
  std::vector<double> e1, e2;
  for (double h : steps) {
    const Jet<2> j = fd_jet_oracle(f, p, h);
    const double ex = std::exp(p[0]), c = std::cos(p[1]), s = std::sin(p[1]);
    e1.push_back(std::max(std::abs(j.d(0) - ex * c), std::abs(j.d(1) + ex * s)));
    e2.push_back(std::max({std::abs(j.d2(0, 0) - ex * c), std::abs(j.d2(0, 1) + ex * s), std::abs(j.d2(1, 1) + ex * c)}));
  }
  EXPECT_NEAR(empirical_order(steps, e1), 2.0, 0.3);
  EXPECT_NEAR(empirical_order(steps, e2), 2.0, 0.3);
}

TEST(FdOracle, StepAndStencilChecks) {
  auto f = [](const std::array<double, 2>& q) { return q[0]; };
  EXPECT_THROW(fd_jet_oracle(f, {0.0, 0.0}, 1.0), Error);
  EXPECT_THROW(fd_jet_oracle(f, {0.0, 0.5}, 1e-3, Domain::patch(0.0, 1.0, 0.0, 1.0)), StencilOutOfDomain);
  EXPECT_NO_THROW(fd_jet_oracle(f, {0.5, 0.5}, 1e-3, Domain::patch(0.0, 1.0, 0.0, 1.0)));
}

OneForm sampled(const Grid& grid, auto&& form) {
  OneForm a{GridField(grid, 2), {}};
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const auto [au, av] = form(grid.u(i), grid.v(j));
      a.alpha(i, j, 0) = au;
      a.alpha(i, j, 1) = av;
    }
  }
  return a;
}

TEST(ExteriorDerivative, ExactFormCirculationsShrink) {
  // alpha = d(exp(sin u / 2) cos v + 0.5 sin v)
  auto form = [](double u, double v) {
    const double e = std::exp(0.5 * std::sin(u));
    return std::array<double, 2>{0.5 * std::cos(u) * e * std::cos(v), -e * std::sin(v) + 0.5 * std::cos(v)};
  };
  std::vector<double> h, density;
  for (int n : {16, 32, 64}) {
    const Grid grid(Domain::torus(), n, n);
    const auto d = grid_exterior_derivative(sampled(grid, form));
    EXPECT_LT(d.max_abs_period, 1e-12);
    h.push_back(grid.hu());
    density.push_back(d.max_abs_density);
  }
  EXPECT_NEAR(empirical_order(h, density), 2.0, 0.3);
  EXPECT_LT(density.back(), 1e-2);
}

TEST(ExteriorDerivative, AreaFormHasUnitDensity) {
  auto form = [](double u, double v) { return std::array<double, 2>{-v / 2, u / 2}; };
  const auto d = grid_exterior_derivative(sampled(Grid(Domain::patch(-1.0, 2.0, 0.5, 1.5), 12, 9), form));
  ASSERT_EQ(d.density.nu, 11);
  ASSERT_EQ(d.density.nv, 8);
  for (double x : d.density.values) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(ExteriorDerivative, DetectsNonRibaucourAlpha) {
  const ChartSpec torus = ChartSpec::clifford_torus(std::numbers::sqrt2 / 2.0);
  const TauSampler tau = tau_sampler(parse_expr("sin(u)*sin(v)"));
  std::vector<double> h, mismatch;
  for (int n : {32, 64, 128}) {
    const auto report = sweep(torus, tau, Grid(Domain::torus(), n, n));
    const auto d = grid_exterior_derivative(report.alpha_form());
    EXPECT_GT(d.max_abs_density, 1e-2) << n;
    // Compare at the cell centres shared by all three grids, away from
    // tau = +-1 where d alpha blows up.
    const int step = n / 32;
    double worst = 0.0;
    for (int i = step - 1; i < n; i += step) {
      for (int j = step - 1; j < n; j += step) {
        const int i1 = (i + 1) % n, j1 = (j + 1) % n;
        const double uc = (i + 1) * report.grid.hu(), vc = (j + 1) * report.grid.hv();
        if (std::abs(std::sin(uc) * std::sin(vc)) > 0.5) continue;
        const auto& g = report.grid;
        double mean = 0.0;
        for (std::size_t q : {g.index(i, j), g.index(i1, j), g.index(i, j1), g.index(i1, j1)}) {
          mean += 0.25 * report.points[q].dalpha;
        }
        worst = std::max(worst, std::abs(d.density(i, j) - mean));
      }
    }
    h.push_back(report.grid.hu());
    mismatch.push_back(worst);
  }
  EXPECT_NEAR(empirical_order(h, mismatch), 2.0, 0.3);
}

TEST(EmpiricalOrder, RecoversPowerLaw) {
  const std::vector<double> h{0.1, 0.05, 0.025};
  const std::vector<double> e{3 * 0.01, 3 * 0.0025, 3 * 0.000625};
  EXPECT_NEAR(empirical_order(h, e), 2.0, 1e-12);
}

}  // namespace
}  // namespace ribau
