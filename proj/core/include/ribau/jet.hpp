#pragma once

/// \file
/// Truncated second-order jets in M variables.
///
/// A Jet<M> carries the value, the gradient and the upper triangle of the
/// Hessian of a smooth function at a point. Arithmetic follows the Leibniz
/// and chain rules through order two, so compositions of the supported
/// operations reproduce exact derivatives up to round-off.
///
/// derivative(x, i) lowers a jet by one order. The resulting second-order
/// slots are unknown and are filled with quiet NaN; they stay NaN through
/// any further arithmetic while values and gradients remain exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "ribau/errors.hpp"

namespace ribau {

template <int M>
struct Jet {
  static_assert(M >= 1, "jets need at least one variable");

  static constexpr int kDim = M;
  static constexpr int kHessSize = M * (M + 1) / 2;

  double value = 0.0;
  std::array<double, M> grad{};
  std::array<double, kHessSize> hess{};

  /// Packed index of the (i, j) Hessian entry; symmetric in (i, j).
  static constexpr int hess_index(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    return i * M - i * (i - 1) / 2 + (j - i);
  }

  static constexpr Jet constant(double c) noexcept {
    Jet j;
    j.value = c;
    return j;
  }

  /// Seed for coordinate i at x.
  static constexpr Jet variable(double x, int i) noexcept {
    Jet j;
    j.value = x;
    j.grad[i] = 1.0;
    return j;
  }

  constexpr double d(int i) const noexcept { return grad[i]; }
  constexpr double d2(int i, int j) const noexcept { return hess[hess_index(i, j)]; }
  constexpr double& d2(int i, int j) noexcept { return hess[hess_index(i, j)]; }

  bool second_order_known() const noexcept {
    return std::none_of(hess.begin(), hess.end(),
                        [](double h) { return std::isnan(h); });
  }

  constexpr Jet& operator+=(const Jet& y) noexcept {
    value += y.value;
    for (int i = 0; i < M; ++i) grad[i] += y.grad[i];
    for (int k = 0; k < kHessSize; ++k) hess[k] += y.hess[k];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& y) noexcept {
    value -= y.value;
    for (int i = 0; i < M; ++i) grad[i] -= y.grad[i];
    for (int k = 0; k < kHessSize; ++k) hess[k] -= y.hess[k];
    return *this;
  }
  constexpr Jet& operator*=(double s) noexcept {
    value *= s;
    for (auto& g : grad) g *= s;
    for (auto& h : hess) h *= s;
    return *this;
  }
  constexpr Jet& operator+=(double s) noexcept {
    value += s;
    return *this;
  }
  constexpr Jet& operator-=(double s) noexcept {
    value -= s;
    return *this;
  }
};

// Composition with a scalar function g given g(x), g'(x), g''(x).
template <int M>
constexpr Jet<M> compose(const Jet<M>& x, double g0, double g1, double g2) noexcept {
  Jet<M> r;
  r.value = g0;
  for (int i = 0; i < M; ++i) r.grad[i] = g1 * x.grad[i];
  for (int i = 0; i < M; ++i) {
    for (int j = i; j < M; ++j) {
      const int k = Jet<M>::hess_index(i, j);
      r.hess[k] = g1 * x.hess[k] + g2 * x.grad[i] * x.grad[j];
    }
  }
  return r;
}

template <int M>
constexpr Jet<M> operator+(Jet<M> x, const Jet<M>& y) noexcept {
  return x += y;
}
template <int M>
constexpr Jet<M> operator-(Jet<M> x, const Jet<M>& y) noexcept {
  return x -= y;
}
template <int M>
constexpr Jet<M> operator-(Jet<M> x) noexcept {
  return x *= -1.0;
}
template <int M>
constexpr Jet<M> operator+(Jet<M> x, double s) noexcept {
  return x += s;
}
template <int M>
constexpr Jet<M> operator+(double s, Jet<M> x) noexcept {
  return x += s;
}
template <int M>
constexpr Jet<M> operator-(Jet<M> x, double s) noexcept {
  return x -= s;
}
template <int M>
constexpr Jet<M> operator-(double s, const Jet<M>& x) noexcept {
  return -x + s;
}
template <int M>
constexpr Jet<M> operator*(Jet<M> x, double s) noexcept {
  return x *= s;
}
template <int M>
constexpr Jet<M> operator*(double s, Jet<M> x) noexcept {
  return x *= s;
}

template <int M>
constexpr Jet<M> operator*(const Jet<M>& x, const Jet<M>& y) noexcept {
  Jet<M> r;
  r.value = x.value * y.value;
  for (int i = 0; i < M; ++i) r.grad[i] = x.grad[i] * y.value + x.value * y.grad[i];
  for (int i = 0; i < M; ++i) {
    for (int j = i; j < M; ++j) {
      const int k = Jet<M>::hess_index(i, j);
      r.hess[k] = x.hess[k] * y.value + x.value * y.hess[k] +
                  x.grad[i] * y.grad[j] + x.grad[j] * y.grad[i];
    }
  }
  return r;
}

template <int M>
Jet<M> reciprocal(const Jet<M>& y) {
  if (!(std::abs(y.value) >= std::numeric_limits<double>::min())) {
    throw DivisionByZeroJet("jet division by a value at machine zero");
  }
  const double inv = 1.0 / y.value;
  return compose(y, inv, -inv * inv, 2.0 * inv * inv * inv);
}

template <int M>
Jet<M> operator/(const Jet<M>& x, const Jet<M>& y) {
  return x * reciprocal(y);
}
template <int M>
Jet<M> operator/(double s, const Jet<M>& y) {
  return s * reciprocal(y);
}
template <int M>
Jet<M> operator/(Jet<M> x, double s) {
  if (!(std::abs(s) >= std::numeric_limits<double>::min())) {
    throw DivisionByZeroJet("jet division by a value at machine zero");
  }
  return x *= 1.0 / s;
}

template <int M>
Jet<M> sqrt(const Jet<M>& x) {
  if (!(x.value > 0.0)) throw DomainErrorJet("sqrt of a non-positive jet value");
  const double s = std::sqrt(x.value);
  return compose(x, s, 0.5 / s, -0.25 / (s * x.value));
}

template <int M>
Jet<M> sin(const Jet<M>& x) {
  const double s = std::sin(x.value);
  return compose(x, s, std::cos(x.value), -s);
}

template <int M>
Jet<M> cos(const Jet<M>& x) {
  const double c = std::cos(x.value);
  return compose(x, c, -std::sin(x.value), -c);
}

template <int M>
Jet<M> exp(const Jet<M>& x) {
  const double e = std::exp(x.value);
  return compose(x, e, e, e);
}

template <int M>
Jet<M> log(const Jet<M>& x) {
  if (!(x.value > 0.0)) throw DomainErrorJet("ln of a non-positive jet value");
  const double inv = 1.0 / x.value;
  return compose(x, std::log(x.value), inv, -inv * inv);
}

/// x^p for a real exponent. Integer exponents accept any base (non-zero when
/// p < 0); non-integer exponents need a positive base.
template <int M>
Jet<M> pow(const Jet<M>& x, double p) {
  const bool integral = p == std::nearbyint(p) && std::abs(p) < 1e15;
  if (integral) {
    if (p == 0.0) return Jet<M>::constant(1.0);
    if (p == 1.0) return x;
    if (p < 0.0 && !(std::abs(x.value) >= std::numeric_limits<double>::min())) {
      throw DivisionByZeroJet("negative power of a jet at machine zero");
    }
  } else if (!(x.value > 0.0)) {
    throw DomainErrorJet("non-integer power of a non-positive jet value");
  }
  const double g0 = std::pow(x.value, p);
  const double g1 = p * std::pow(x.value, p - 1.0);
  const double g2 = p * (p - 1.0) * std::pow(x.value, p - 2.0);
  return compose(x, g0, g1, g2);
}

template <int M>
Jet<M> pow(const Jet<M>& x, const Jet<M>& y) {
  return exp(y * log(x));
}

/// Partial derivative d/du_i of x as a jet one order lower.
template <int M>
Jet<M> derivative(const Jet<M>& x, int i) noexcept {
  Jet<M> r;
  r.value = x.grad[i];
  for (int j = 0; j < M; ++j) r.grad[j] = x.d2(i, j);
  r.hess.fill(std::numeric_limits<double>::quiet_NaN());
  return r;
}

/// Largest absolute difference over all known slots.
template <int M>
double max_abs_diff(const Jet<M>& x, const Jet<M>& y, bool include_hess = true) noexcept {
  double m = std::abs(x.value - y.value);
  for (int i = 0; i < M; ++i) m = std::max(m, std::abs(x.grad[i] - y.grad[i]));
  if (include_hess) {
    for (int k = 0; k < Jet<M>::kHessSize; ++k) m = std::max(m, std::abs(x.hess[k] - y.hess[k]));
  }
  return m;
}

template <int M>
std::ostream& operator<<(std::ostream& os, const Jet<M>& x) {
  os << "{" << x.value << "; [";
  for (int i = 0; i < M; ++i) os << (i ? ", " : "") << x.grad[i];
  os << "]; [";
  for (int k = 0; k < Jet<M>::kHessSize; ++k) os << (k ? ", " : "") << x.hess[k];
  return os << "]}";
}

}  // namespace ribau
