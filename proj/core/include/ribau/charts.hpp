#pragma once

/// \file
/// Built-in and user-defined Legendre charts of surfaces in S^3 (m = 2).
///
/// Shape-operator convention: dxi = -df o A, so that -dxi + tau df =
/// df o (A + tau Id) and a congruence is regular where -tau avoids the
/// principal curvatures.

#include <array>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "ribau/expr.hpp"
#include "ribau/lie.hpp"

namespace ribau {

/// Rectangular parameter domain with optional periodicity per axis.
struct Domain {
  double u0 = 0.0;
  double u1 = 2.0 * std::numbers::pi;
  double v0 = 0.0;
  double v1 = 2.0 * std::numbers::pi;
  bool periodic_u = true;
  bool periodic_v = true;

  double span_u() const { return u1 - u0; }
  double span_v() const { return v1 - v0; }
  bool empty() const { return !(u1 > u0) || !(v1 > v0); }

  static Domain torus() { return Domain{}; }
  static Domain patch(double u0, double u1, double v0, double v1) {
    return Domain{u0, u1, v0, v1, false, false};
  }
};

enum class ChartKind { clifford_torus, parallel_of, custom };

struct ChartSpec {
  ChartKind kind = ChartKind::clifford_torus;
  double r = std::numbers::sqrt2 / 2.0;  // clifford_torus radius, in (0, 1)
  double c = 0.0;                         // parallel_of distance
  std::shared_ptr<const ChartSpec> base;  // parallel_of
  std::array<Expr, 4> f_exprs{};          // custom
  std::array<Expr, 4> xi_exprs{};         // custom
  Domain domain;

  /// f = (r cos u, r sin u, s cos v, s sin v), xi = (-s cos u, -s sin u, r cos v, r sin v).
  static ChartSpec clifford_torus(double r);
  /// Parallel Legendre map at spherical distance c:
  /// f_c = cos c f + sin c xi, xi_c = -sin c f + cos c xi.
  static ChartSpec parallel_of(ChartSpec base, double c);
  static ChartSpec custom(std::array<Expr, 4> f, std::array<Expr, 4> xi, Domain domain);

  bool builtin() const;
  double contact_tolerance() const {
    return builtin() ? kBuiltinContactTolerance : kUserContactTolerance;
  }
  std::string describe() const;
};

/// (f, xi) in R^4 evaluated in scalar type T (double or Jet<2>).
template <class T>
std::pair<std::array<T, 4>, std::array<T, 4>> chart_values(const ChartSpec& spec, const T& u,
                                                           const T& v);

/// Certified Legendre frame at a parameter point. Periodic axes accept any
/// coordinate; non-periodic axes require the point to lie in the domain.
/// contact_tol <= 0 selects the chart's default tolerance.
LegendreFrame<2> eval_chart(const ChartSpec& spec, std::array<double, 2> point,
                            double contact_tol = 0.0);

}  // namespace ribau
