#include "ribau/charts.hpp"

#include <fmt/format.h>

#include <cmath>

#include "ribau/errors.hpp"

namespace ribau {

ChartSpec ChartSpec::clifford_torus(double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(fmt::format("clifford_torus radius {} not in (0, 1)", r));
  ChartSpec s;
  s.kind = ChartKind::clifford_torus;
  s.r = r;
  s.domain = Domain::torus();
  return s;
}

ChartSpec ChartSpec::parallel_of(ChartSpec base, double c) {
  ChartSpec s;
  s.kind = ChartKind::parallel_of;
  s.c = c;
  s.domain = base.domain;
  s.base = std::make_shared<const ChartSpec>(std::move(base));
  return s;
}

ChartSpec ChartSpec::custom(std::array<Expr, 4> f, std::array<Expr, 4> xi, Domain domain) {
  if (domain.empty()) throw Error("custom chart domain is empty");
  ChartSpec s;
  s.kind = ChartKind::custom;
  s.f_exprs = std::move(f);
  s.xi_exprs = std::move(xi);
  s.domain = domain;
  return s;
}

bool ChartSpec::builtin() const {
  switch (kind) {
    case ChartKind::clifford_torus:
      return true;
    case ChartKind::parallel_of:
      return base->builtin();
    case ChartKind::custom:
      return false;
  }
  return false;
}

std::string ChartSpec::describe() const {
  switch (kind) {
    case ChartKind::clifford_torus:
      return fmt::format("clifford_torus({})", r);
    case ChartKind::parallel_of:
      return fmt::format("parallel_of({}, {})", base->describe(), c);
    case ChartKind::custom: {
      std::string out = "custom(f=[";
      for (int k = 0; k < 4; ++k) out += (k ? ", " : "") + print_expr(f_exprs[k]);
      out += "], xi=[";
      for (int k = 0; k < 4; ++k) out += (k ? ", " : "") + print_expr(xi_exprs[k]);
      return out + "])";
    }
  }
  return "unknown";
}

template <class T>
std::pair<std::array<T, 4>, std::array<T, 4>> chart_values(const ChartSpec& spec, const T& u,
                                                           const T& v) {
  using std::cos;
  using std::sin;
  switch (spec.kind) {
    case ChartKind::clifford_torus: {
      const double r = spec.r;
      const double s = std::sqrt(1.0 - r * r);
      const T cu = cos(u), su = sin(u), cv = cos(v), sv = sin(v);
      return {{r * cu, r * su, s * cv, s * sv}, {-s * cu, -s * su, r * cv, r * sv}};
    }
    case ChartKind::parallel_of: {
      auto [f, xi] = chart_values(*spec.base, u, v);
      const double cc = std::cos(spec.c), sc = std::sin(spec.c);
      std::array<T, 4> fp, xp;
      for (int k = 0; k < 4; ++k) {
        fp[k] = cc * f[k] + sc * xi[k];
        xp[k] = -sc * f[k] + cc * xi[k];
      }
      return {fp, xp};
    }
    case ChartKind::custom: {
      std::array<T, 4> f, xi;
      for (int k = 0; k < 4; ++k) {
        f[k] = evaluate(spec.f_exprs[k], u, v);
        xi[k] = evaluate(spec.xi_exprs[k], u, v);
      }
      return {f, xi};
    }
  }
  throw Error("unknown chart kind");
}

template std::pair<std::array<double, 4>, std::array<double, 4>> chart_values<double>(
    const ChartSpec&, const double&, const double&);
template std::pair<std::array<Jet<2>, 4>, std::array<Jet<2>, 4>> chart_values<Jet<2>>(
    const ChartSpec&, const Jet<2>&, const Jet<2>&);

namespace {

double wrap(double x, double lo, double hi, bool periodic, const char* axis) {
  constexpr double kSlack = 1e-12;
  if (x >= lo - kSlack && x <= hi + kSlack) return x;
  if (!periodic) {
    throw OutOfDomain(fmt::format("{} = {} outside [{}, {}]", axis, x, lo, hi));
  }
  const double span = hi - lo;
  return lo + (x - lo) - span * std::floor((x - lo) / span);
}

}  // namespace

LegendreFrame<2> eval_chart(const ChartSpec& spec, std::array<double, 2> point, double contact_tol) {
  const Domain& d = spec.domain;
  point[0] = wrap(point[0], d.u0, d.u1, d.periodic_u, "u");
  point[1] = wrap(point[1], d.v0, d.v1, d.periodic_v, "v");
  const auto [f, xi] =
      chart_values(spec, Jet<2>::variable(point[0], 0), Jet<2>::variable(point[1], 1));
  LieJet<2> fj, xj;
  for (int k = 0; k < 4; ++k) {
    fj.spatial[k] = f[k];
    xj.spatial[k] = xi[k];
  }
  return lift_frame(fj, xj, point, contact_tol > 0.0 ? contact_tol : spec.contact_tolerance());
}

}  // namespace ribau
