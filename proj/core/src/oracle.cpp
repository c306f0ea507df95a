#include "ribau/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "ribau/grid.hpp"
#include "ribau/ribaucour.hpp"

namespace ribau {

namespace {

struct Field {
  std::function<Jet<2>(std::array<double, 2>)> jet;
  bool second_order;
};

}  // namespace

OracleResult oracle_convergence(const OracleCase& c, const std::vector<double>& steps) {
  std::vector<Field> fields;
  fields.push_back({[&](std::array<double, 2> x) { return evaluate_jet(c.tau, x[0], x[1]); }, true});
  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < 4; ++k) {
      fields.push_back({[&c, side, k](std::array<double, 2> x) {
                          const auto fx = chart_values(c.chart, Jet<2>::variable(x[0], 0),
                                                       Jet<2>::variable(x[1], 1));
                          return side == 0 ? fx.first[k] : fx.second[k];
                        },
                        true});
    }
  }
  auto a_jet = [&](std::array<double, 2> x) {
    const LegendreFrame<2> frame = eval_chart(c.chart, x);
    return transform(frame, evaluate_jet(c.tau, x[0], x[1])).a;
  };
  OracleResult out;
  out.steps = steps;
  try {
    (void)a_jet(c.point);
    out.transform_checked = true;
    fields.push_back({a_jet, false});
  } catch (const NotRegular&) {
  }

  for (double h : steps) {
    double e1 = 0.0, e2 = 0.0;
    for (const Field& f : fields) {
      const Jet<2> exact = f.jet(c.point);
      const Jet<2> fd = fd_jet_oracle([&](const std::array<double, 2>& x) { return f.jet(x).value; }, c.point, h);
      for (int i = 0; i < 2; ++i) e1 = std::max(e1, std::abs(exact.grad[i] - fd.grad[i]));
      if (f.second_order) {
        for (std::size_t k = 0; k < exact.hess.size(); ++k) e2 = std::max(e2, std::abs(exact.hess[k] - fd.hess[k]));
      }
    }
    out.first_errors.push_back(e1);
    out.second_errors.push_back(e2);
  }
  out.first_order = empirical_order(out.steps, out.first_errors);
  out.second_order = empirical_order(out.steps, out.second_errors);
  return out;
}

std::vector<OracleCase> random_oracle_cases(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.4, 0.85), dist(-1.0, 1.0), where(0.3, 6.0);
  std::bernoulli_distribution parallel(0.3);
  std::vector<OracleCase> out;
  for (int n = 0; n < count; ++n) {
    ChartSpec chart = ChartSpec::clifford_torus(radius(rng));
    if (parallel(rng)) chart = ChartSpec::parallel_of(chart, dist(rng));
    Expr tau = random_smooth_expr(rng, 3);
    const double u = where(rng);
    const double v = where(rng);
    out.push_back({chart, std::move(tau), {u, v}});
  }
  return out;
}

}  // namespace ribau
