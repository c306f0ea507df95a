#pragma once

/// \file
/// Pointwise Ribaucour transform of a Legendre frame.
///
/// Given a certified frame (f, xi) and a representative function tau of the
/// enveloped congruence s = <xi - tau f - tau t0 + t1>, transform() builds
///
///     D_i       = (-dxi + tau df)(d_i)
///     G_ij      = (D_i, D_j)                  metric < , >_-
///     gradbar   = G^{-1} dtau
///     fcheck    = sum_i D_i gradbar^i,        mu^2 = (fcheck, fcheck)
///     a         = 1 - 2 / (tau^2 + mu^2 + 1), b = tau (a - 1)
///     fhat      = a f + b xi + (1 - a) fcheck
///     xihat     = xi - tau f + tau fhat
///     alpha(d_i)= (d_i f, -fcheck)
///
/// Every quantity is a jet, so alpha comes with exact first partials and the
/// closedness test d alpha = 0 needs no differencing. Quantities derived from
/// first derivatives of the inputs are exact to first order only; their
/// second-order slots are NaN.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "ribau/errors.hpp"
#include "ribau/jet.hpp"
#include "ribau/jet_matrix.hpp"
#include "ribau/lie.hpp"

namespace ribau {

template <int M>
std::array<double, 2> where_of(const std::array<double, M>& p) {
  if constexpr (M >= 2) {
    return {p[0], p[1]};
  } else {
    return {p[0], 0.0};
  }
}

template <int M>
struct MinusMetric {
  std::array<LieJet<M>, M> columns;  // (-dxi + tau df)(d_i)
  JetMatrix<M, M> gram;
  double det_value = 0.0;
};

/// Gram matrix of < , >_- in the coordinate basis. Throws NotRegular when the
/// value-level determinant fails the relative singularity screen.
template <int M>
MinusMetric<M> minus_metric(const LegendreFrame<M>& frame, const Jet<M>& tau,
                            double singular_tol = kSingularTolerance) {
  MinusMetric<M> g;
  for (int i = 0; i < M; ++i) {
    g.columns[i] = tau * derivative(frame.f, i) - derivative(frame.xi, i);
  }
  Eigen::Matrix<double, M, M> values;
  for (int i = 0; i < M; ++i) {
    for (int j = i; j < M; ++j) {
      g.gram(i, j) = lie_inner(g.columns[i], g.columns[j]);
      g.gram(j, i) = g.gram(i, j);
      values(i, j) = values(j, i) = g.gram(i, j).value;
    }
  }
  g.det_value = values.determinant();
  const double scale = g.gram.max_abs_value();
  if (!(std::abs(g.det_value) >= singular_tol * std::pow(scale, M)) || scale == 0.0) {
    throw NotRegular("-dxi + tau df is degenerate (det " + std::to_string(g.det_value) + ")",
                     where_of<M>(frame.point));
  }
  return g;
}

struct TransformResiduals {
  double norms = 0.0;         // |fhat|=1, |xihat|=1, (fhat, xihat)=0
  double fourth = 0.0;        // db - tau da + (1-a)(-dxi + tau df, fcheck) = 0
  double contact = 0.0;       // (d fhat, xihat) = 0 evaluated directly
  double f_check_perp = 0.0;  // (fcheck, f) = (fcheck, xi) = 0
  double mu2 = 0.0;           // (fcheck, fcheck) = <gradbar, gradbar>_-
  double envelope = 0.0;      // sigma = (xihat + t1) - tau (fhat + t0)

  double hat_frame() const { return std::max({norms, fourth, contact}); }
  double max() const { return std::max({norms, fourth, contact, f_check_perp, mu2, envelope}); }
};

template <int M>
struct TransformResult {
  Jet<M> tau;
  MinusMetric<M> metric;
  std::array<Jet<M>, M> grad_bar;
  Jet<M> mu2;
  Jet<M> a;
  Jet<M> b;
  LieJet<M> f_check;
  LieJet<M> f_hat;
  LieJet<M> xi_hat;
  std::array<Jet<M>, M> alpha;
  TransformResiduals residuals;

  /// (d alpha)(d_i, d_j) = d_i alpha_j - d_j alpha_i.
  double dalpha(int i, int j) const { return alpha[j].grad[i] - alpha[i].grad[j]; }

  double max_abs_dalpha() const {
    double m = 0.0;
    for (int i = 0; i < M; ++i)
      for (int j = i + 1; j < M; ++j) m = std::max(m, std::abs(dalpha(i, j)));
    return m;
  }
  double max_abs_alpha() const {
    double m = 0.0;
    for (const auto& a : alpha) m = std::max(m, std::abs(a.value));
    return m;
  }
};

template <int M>
TransformResult<M> transform(const LegendreFrame<M>& frame, const Jet<M>& tau,
                             double singular_tol = kSingularTolerance) {
  TransformResult<M> r;
  r.tau = tau;
  r.metric = minus_metric(frame, tau, singular_tol);
  JetMatrix<M, M> inv;
  try {
    inv = inverse(r.metric.gram, singular_tol);
  } catch (const SingularMatrix&) {
    throw NotRegular("-dxi + tau df is degenerate", where_of<M>(frame.point));
  }

  std::array<Jet<M>, M> dtau;
  for (int i = 0; i < M; ++i) dtau[i] = derivative(tau, i);
  for (int i = 0; i < M; ++i) {
    Jet<M> acc;
    for (int j = 0; j < M; ++j) acc += inv(i, j) * dtau[j];
    r.grad_bar[i] = acc;
  }

  LieJet<M> fc;
  for (int i = 0; i < M; ++i) fc += r.grad_bar[i] * r.metric.columns[i];
  r.f_check = fc;

  // mu^2 = <gradbar, gradbar>_- = gradbar^T G gradbar
  Jet<M> mu2;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) mu2 += r.grad_bar[i] * r.metric.gram(i, j) * r.grad_bar[j];
  r.mu2 = mu2;

  r.a = 1.0 - 2.0 / (tau * tau + mu2 + 1.0);
  r.b = tau * (r.a - 1.0);
  r.f_hat = r.a * frame.f + r.b * frame.xi + (1.0 - r.a) * r.f_check;
  r.xi_hat = frame.xi - tau * frame.f + tau * r.f_hat;
  for (int i = 0; i < M; ++i) r.alpha[i] = -lie_inner(derivative(frame.f, i), r.f_check);

  // Diagnostics on values.
  auto& res = r.residuals;
  const LieVector<M> fh = values(r.f_hat), xh = values(r.xi_hat), fv = values(frame.f),
                     xv = values(frame.xi), fcv = values(r.f_check);
  const double a = r.a.value;
  res.norms = std::max({std::abs(lie_inner(fh, fh) - 1.0), std::abs(lie_inner(xh, xh) - 1.0),
                        std::abs(lie_inner(fh, xh))});
  for (int i = 0; i < M; ++i) {
    const double fourth = r.b.grad[i] - tau.value * r.a.grad[i] +
                          (1.0 - a) * lie_inner(values(r.metric.columns[i]), fcv);
    res.fourth = std::max(res.fourth, std::abs(fourth));
    res.contact = std::max(res.contact, std::abs(lie_inner(partial_values(r.f_hat, i), xh)));
  }
  res.f_check_perp = std::max(std::abs(lie_inner(fcv, fv)), std::abs(lie_inner(fcv, xv)));
  res.mu2 = std::abs(lie_inner(fcv, fcv) - mu2.value);
  const LieVector<M> sigma = xv - tau.value * fv - tau.value * t0<M>() + t1<M>();
  res.envelope = max_abs(sigma - ((xh + t1<M>()) - tau.value * (fh + t0<M>())));
  return r;
}

/// alphahat(d_i) = (a - 1)^{-1} (d_i fhat, f), on values.
template <int M>
std::array<double, M> alpha_hat(const LegendreFrame<M>& frame, const TransformResult<M>& r) {
  std::array<double, M> out{};
  const LieVector<M> fv = values(frame.f);
  for (int i = 0; i < M; ++i) {
    out[i] = lie_inner(partial_values(r.f_hat, i), fv) / (r.a.value - 1.0);
  }
  return out;
}

template <int M>
struct Reconstruction {
  LegendreFrame<M> hat_frame;
  TransformResult<M> back;         // transform of (fhat, xihat) with the same tau
  std::array<double, M> alpha_hat{};  // (d fhat, -fcheckhat)
  double involution = 0.0;         // max(|f_rec - f|_inf, |xi_rec - xi|_inf)
  double reconstruction = 0.0;               // fcheckhat = fcheck + mu^2 (f - fhat), both written forms
  double mu_length = 0.0;          // | |fcheckhat| - mu |
  double metric = 0.0;             // max |G_hat - G|
};

/// Runs the transform on (fhat, xihat) with the same tau and compares the
/// result with the original frame. Representatives are compared directly;
/// sign flips count as discrepancies. Throws InvolutionFailure when the
/// discrepancy exceeds involution_tol (disabled with std::nullopt).
template <int M>
Reconstruction<M> reconstruct(const LegendreFrame<M>& frame, const TransformResult<M>& r,
                              std::optional<double> involution_tol = 1e-8,
                              double contact_tol = kUserContactTolerance,
                              double singular_tol = kSingularTolerance) {
  Reconstruction<M> rec{lift_frame(r.f_hat, r.xi_hat, frame.point, contact_tol), {}, {}};
  rec.back = transform(rec.hat_frame, r.tau, singular_tol);
  const LieVector<M> fv = values(frame.f), xv = values(frame.xi), fh = values(r.f_hat),
                     fc = values(r.f_check), fch = values(rec.back.f_check);
  rec.involution = std::max(max_abs(values(rec.back.f_hat) - fv),
                            max_abs(values(rec.back.xi_hat) - xv));
  const double mu2 = r.mu2.value, a = r.a.value, tau = r.tau.value;
  const double form1 = max_abs(fch - (fc + mu2 * (fv - fh)));
  const double form2 = max_abs(fch - (fc + mu2 * (1.0 - a) * (fv + tau * values(frame.xi) - fc)));
  rec.reconstruction = std::max(form1, form2);
  rec.mu_length = std::abs(std::sqrt(std::max(0.0, lie_inner(fch, fch))) - std::sqrt(std::max(0.0, mu2)));
  for (int i = 0; i < M; ++i) {
    rec.alpha_hat[i] = -lie_inner(partial_values(r.f_hat, i), fch);
    for (int j = 0; j < M; ++j) {
      rec.metric = std::max(rec.metric, std::abs(rec.back.metric.gram(i, j).value -
                                                 r.metric.gram(i, j).value));
    }
  }
  if (involution_tol && rec.involution > *involution_tol) {
    throw InvolutionFailure("reconstruction does not return the original frame", rec.involution);
  }
  return rec;
}

/// max_i |(-d_i xihat + tau d_i fhat) - (-d_i xi + tau d_i f) - (f - fhat) d_i tau|_inf
template <int M>
double pair_residual(const LegendreFrame<M>& frame, const TransformResult<M>& r) {
  const double tau = r.tau.value;
  const LieVector<M> fv = values(frame.f), fh = values(r.f_hat);
  double m = 0.0;
  for (int i = 0; i < M; ++i) {
    const LieVector<M> lhs = tau * partial_values(r.f_hat, i) - partial_values(r.xi_hat, i);
    const LieVector<M> rhs = values(r.metric.columns[i]) + r.tau.grad[i] * (fv - fh);
    m = std::max(m, max_abs(lhs - rhs));
  }
  return m;
}

/// fcheck through the shape operator of f: df o (A + tau Id)^{-1} (grad_f tau)
/// with dxi = -df o A and grad_f the gradient of the induced metric (df, df).
template <int M>
LieJet<M> shape_operator_path(const LegendreFrame<M>& frame, const Jet<M>& tau,
                              double singular_tol = kSingularTolerance) {
  std::array<LieJet<M>, M> df, dxi;
  for (int i = 0; i < M; ++i) {
    df[i] = derivative(frame.f, i);
    dxi[i] = derivative(frame.xi, i);
  }
  JetMatrix<M, M> induced, second;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      induced(i, j) = lie_inner(df[i], df[j]);
      second(i, j) = lie_inner(df[i], dxi[j]);
    }
  }
  JetMatrix<M, M> induced_inv;
  try {
    induced_inv = inverse(induced, singular_tol);
  } catch (const SingularMatrix&) {
    throw NotHypersurface("induced metric (df, df) is singular");
  }
  JetMatrix<M, M> shifted = induced_inv * second;  // = -A
  for (auto& e : shifted.entries) e = -e;
  for (int i = 0; i < M; ++i) shifted(i, i) += tau;
  JetMatrix<M, M> shifted_inv;
  try {
    shifted_inv = inverse(shifted, singular_tol);
  } catch (const SingularMatrix&) {
    throw NotRegular("A + tau Id is singular", where_of<M>(frame.point));
  }
  std::array<Jet<M>, M> grad_f;
  for (int i = 0; i < M; ++i) {
    Jet<M> acc;
    for (int j = 0; j < M; ++j) acc += induced_inv(i, j) * derivative(tau, j);
    grad_f[i] = acc;
  }
  LieJet<M> out;
  for (int k = 0; k < M; ++k) {
    Jet<M> coeff;
    for (int l = 0; l < M; ++l) coeff += shifted_inv(k, l) * grad_f[l];
    out += coeff * df[k];
  }
  return out;
}

template <int M>
inline constexpr int kPairs = M * (M - 1) / 2;

template <int M>
struct CurvatureCheck {
  std::array<double, kPairs<M>> wedge{};  // (beta(f+t0) ^ beta(fhat+t0))(d_i, d_j), i < j
  std::array<double, kPairs<M>> rhs{};    // (1 - a) dalpha(d_i, d_j)
  double residual = 0.0;                  // max |wedge - rhs|
  double relative = 0.0;                  // max |wedge - rhs| / (1 + |rhs|)
  double alpha_sum = 0.0;                 // max_i |alpha_i + alphahat_i - d_i ln(1 - a)|
};

/// Second fundamental form of <F0, Fhat0>: beta psi = d psi - psi omega with
/// omega = alpha for f + t0 and alphahat for fhat + t0.
template <int M>
CurvatureCheck<M> curvature_identity(const LegendreFrame<M>& frame, const TransformResult<M>& r) {
  CurvatureCheck<M> c;
  const std::array<double, M> ah = alpha_hat(frame, r);
  const LieVector<M> e = values(frame.point_sphere());
  const LieVector<M> eh = values(r.f_hat) + t0<M>();
  std::array<LieVector<M>, M> beta, beta_hat;
  const double one_minus_a = 1.0 - r.a.value;
  for (int i = 0; i < M; ++i) {
    beta[i] = partial_values(frame.f, i) - r.alpha[i].value * e;
    beta_hat[i] = partial_values(r.f_hat, i) - ah[i] * eh;
    const double dln = -r.a.grad[i] / one_minus_a;
    c.alpha_sum = std::max(c.alpha_sum, std::abs(r.alpha[i].value + ah[i] - dln));
  }
  int k = 0;
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j, ++k) {
      c.wedge[k] = lie_inner(beta[i], beta_hat[j]) - lie_inner(beta[j], beta_hat[i]);
      c.rhs[k] = one_minus_a * r.dalpha(i, j);
      const double diff = std::abs(c.wedge[k] - c.rhs[k]);
      c.residual = std::max(c.residual, diff);
      c.relative = std::max(c.relative, diff / (1.0 + std::abs(c.rhs[k])));
    }
  }
  return c;
}

}  // namespace ribau
