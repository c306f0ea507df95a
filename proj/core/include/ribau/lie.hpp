#pragma once

/// \file
/// The ambient space R^{m+2,2} of Lie sphere geometry, Legendre frames and
/// the sphere congruence section they carry.
///
/// Basis convention: the first m+2 coordinates span the spatial part
/// R^{m+2} = <t0, t1>^perp, followed by the coefficients of t0 and t1.
/// Serialized LieVectors use the same (spatial..., c0, c1) order.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "ribau/errors.hpp"
#include "ribau/jet.hpp"

namespace ribau {

template <int M, class T = double>
struct LieVec {
  static constexpr int kSpatial = M + 2;
  static constexpr int kSize = M + 4;

  std::array<T, M + 2> spatial{};
  T c0{};
  T c1{};

  constexpr T& operator[](int k) noexcept {
    return k < kSpatial ? spatial[k] : (k == kSpatial ? c0 : c1);
  }
  constexpr const T& operator[](int k) const noexcept {
    return k < kSpatial ? spatial[k] : (k == kSpatial ? c0 : c1);
  }

  constexpr LieVec& operator+=(const LieVec& y) {
    for (int k = 0; k < kSize; ++k) (*this)[k] += y[k];
    return *this;
  }
  constexpr LieVec& operator-=(const LieVec& y) {
    for (int k = 0; k < kSize; ++k) (*this)[k] -= y[k];
    return *this;
  }
};

template <int M>
using LieVector = LieVec<M, double>;
template <int M>
using LieJet = LieVec<M, Jet<M>>;

template <int M, class T>
constexpr LieVec<M, T> operator+(LieVec<M, T> x, const LieVec<M, T>& y) {
  return x += y;
}
template <int M, class T>
constexpr LieVec<M, T> operator-(LieVec<M, T> x, const LieVec<M, T>& y) {
  return x -= y;
}
template <int M, class T, class S>
constexpr LieVec<M, T> operator*(const S& s, const LieVec<M, T>& x) {
  LieVec<M, T> r;
  for (int k = 0; k < LieVec<M, T>::kSize; ++k) r[k] = s * x[k];
  return r;
}
template <int M, class T>
constexpr LieVec<M, T> operator-(const LieVec<M, T>& x) {
  return -1.0 * x;
}

/// (x, y) = sum spatial_i x_i y_i - c0(x) c0(y) - c1(x) c1(y).
template <int M, class T>
constexpr T lie_inner(const LieVec<M, T>& x, const LieVec<M, T>& y) {
  T acc = x.spatial[0] * y.spatial[0];
  for (int i = 1; i < M + 2; ++i) acc += x.spatial[i] * y.spatial[i];
  acc -= x.c0 * y.c0;
  acc -= x.c1 * y.c1;
  return acc;
}

template <int M, class T = double>
constexpr LieVec<M, T> t0() {
  LieVec<M, T> v;
  v.c0 = T(1.0);
  return v;
}
template <int M, class T = double>
constexpr LieVec<M, T> t1() {
  LieVec<M, T> v;
  v.c1 = T(1.0);
  return v;
}

template <int M>
LieJet<M> t0_jet() {
  LieJet<M> v;
  v.c0 = Jet<M>::constant(1.0);
  return v;
}
template <int M>
LieJet<M> t1_jet() {
  LieJet<M> v;
  v.c1 = Jet<M>::constant(1.0);
  return v;
}

template <int M>
LieVector<M> values(const LieJet<M>& x) {
  LieVector<M> r;
  for (int k = 0; k < LieVector<M>::kSize; ++k) r[k] = x[k].value;
  return r;
}

/// Coordinate partial d/du_i of the value, as a plain vector.
template <int M>
LieVector<M> partial_values(const LieJet<M>& x, int i) {
  LieVector<M> r;
  for (int k = 0; k < LieVector<M>::kSize; ++k) r[k] = x[k].grad[i];
  return r;
}

/// d/du_i of x as a jet-valued vector one order lower.
template <int M>
LieJet<M> derivative(const LieJet<M>& x, int i) {
  LieJet<M> r;
  for (int k = 0; k < LieJet<M>::kSize; ++k) r[k] = derivative(x[k], i);
  return r;
}

template <int M>
double max_abs(const LieVector<M>& x) {
  double m = 0.0;
  for (int k = 0; k < LieVector<M>::kSize; ++k) m = std::max(m, std::abs(x[k]));
  return m;
}

template <int M>
LieJet<M> constant_jet(const LieVector<M>& x) {
  LieJet<M> r;
  for (int k = 0; k < LieVector<M>::kSize; ++k) r[k] = Jet<M>::constant(x[k]);
  return r;
}

/// Max residuals of the Legendre frame invariants at one point.
struct FrameCertificate {
  double unit_f = 0.0;       // | |f|^2 - 1 |
  double unit_xi = 0.0;      // | |xi|^2 - 1 |
  double orthogonal = 0.0;   // |(f, xi)|
  double contact = 0.0;      // max_i max(|(d_i f, xi)|, |(f, d_i xi)|)
  double time_parts = 0.0;   // f and xi must have zero t0/t1 parts
  double immersion = 0.0;    // min over unit X of sqrt(|df X|^2 + |dxi X|^2)

  double max_residual() const {
    return std::max({unit_f, unit_xi, orthogonal, contact, time_parts});
  }
};

inline constexpr double kImmersionFloor = 1e-10;
inline constexpr double kUserContactTolerance = 1e-8;
inline constexpr double kBuiltinContactTolerance = 1e-12;

/// A chart point's spherical projection f and spherical unit normal xi as
/// jet-valued vectors, certified against the Legendre frame invariants.
template <int M>
struct LegendreFrame {
  LieJet<M> f;
  LieJet<M> xi;
  std::array<double, M> point{};
  FrameCertificate certificate;

  /// Lifts F0 = <f + t0> and F1 = <xi + t1>.
  LieJet<M> point_sphere() const { return f + t0_jet<M>(); }
  LieJet<M> great_sphere() const { return xi + t1_jet<M>(); }
};

template <int M>
FrameCertificate certify(const LieJet<M>& f, const LieJet<M>& xi) {
  FrameCertificate cert;
  const LieVector<M> fv = values(f);
  const LieVector<M> xv = values(xi);
  cert.unit_f = std::abs(lie_inner(fv, fv) - 1.0);
  cert.unit_xi = std::abs(lie_inner(xv, xv) - 1.0);
  cert.orthogonal = std::abs(lie_inner(fv, xv));
  cert.time_parts = std::max({std::abs(fv.c0), std::abs(fv.c1), std::abs(xv.c0), std::abs(xv.c1)});

  Eigen::Matrix<double, M, M> gram;
  std::array<LieVector<M>, M> df, dxi;
  for (int i = 0; i < M; ++i) {
    df[i] = partial_values(f, i);
    dxi[i] = partial_values(xi, i);
    cert.contact = std::max({cert.contact, std::abs(lie_inner(df[i], xv)),
                             std::abs(lie_inner(fv, dxi[i]))});
  }
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      gram(i, j) = lie_inner(df[i], df[j]) + lie_inner(dxi[i], dxi[j]);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, M, M>> eig(
      gram, Eigen::EigenvaluesOnly);
  cert.immersion = std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
  return cert;
}

/// Builds a frame from jet-valued (f, xi) and checks it. Throws
/// ContactViolation when any norm/orthogonality/contact residual exceeds
/// contact_tol and NotImmersed when df and dxi vanish together in some
/// direction.
template <int M>
LegendreFrame<M> lift_frame(const LieJet<M>& f, const LieJet<M>& xi,
                            const std::type_identity_t<std::array<double, M>>& point,
                            double contact_tol = kUserContactTolerance) {
  LegendreFrame<M> frame{f, xi, point, certify(f, xi)};
  const auto& c = frame.certificate;
  if (c.max_residual() > contact_tol) {
    throw ContactViolation("Legendre frame violates the contact relations (residual " +
                               std::to_string(c.max_residual()) + ")",
                           c.max_residual());
  }
  if (c.immersion < kImmersionFloor) {
    throw NotImmersed("df and dxi vanish simultaneously in some direction");
  }
  return frame;
}

/// The enveloped sphere congruence s = <sigma>, sigma = xi - tau f - tau t0 + t1.
template <int M>
struct SphereCongruence {
  Jet<M> tau;
  LieJet<M> sigma;
  double null_residual = 0.0;  // |(sigma, sigma)|
  double span_residual = 0.0;  // |sigma - (xi + t1) + tau (f + t0)|_inf
};

template <int M>
SphereCongruence<M> sphere_congruence(const LegendreFrame<M>& frame, const Jet<M>& tau) {
  SphereCongruence<M> s;
  s.tau = tau;
  s.sigma = frame.xi - tau * frame.f - tau * t0_jet<M>() + t1_jet<M>();
  const LieVector<M> sv = values(s.sigma);
  s.null_residual = std::abs(lie_inner(sv, sv));
  s.span_residual = max_abs(sv - values(frame.great_sphere()) +
                            tau.value * values(frame.point_sphere()));
  return s;
}

}  // namespace ribau
