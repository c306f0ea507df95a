#pragma once

/// \file
/// Grid sweeps of the Ribaucour transform over a chart (m = 2): regularity,
/// the closedness test for alpha and all pointwise identity residuals.

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "ribau/charts.hpp"
#include "ribau/grid.hpp"
#include "ribau/ribaucour.hpp"

namespace ribau {

/// Gates used across the engine; every one can be overridden from a scene.
struct Tolerances {
  double singular = kSingularTolerance;
  double contact = 0.0;  // <= 0: chart default (1e-12 builtin, 1e-8 custom)
  double closedness = 1e-7;  // Ribaucour iff max|d alpha| < closedness * (1 + max|alpha|)
  double hat_frame = 1e-9;       // |fhat| = |xihat| = 1, (fhat, xihat) = 0 and the contact relations
  double pair = 1e-9;            // -dxihat + tau dfhat = -dxi + tau df + (f - fhat) dtau
  double reconstruction = 1e-9;  // fcheckhat = fcheck + mu^2 (f - fhat) and |fcheckhat| = mu
  double alpha_sum = 1e-8;       // alpha + alphahat = d ln(1 - a)
  double involution = 1e-8;
  double curvature = 1e-8;
  double shape_path = 1e-10;
  double loop = 1e-6;
  double bianchi = 1e-8;
  double mask = 1e-6;
  double parallel = 1e-7;
  double dual_consistency = 1e-5;
  double gamma_identity = 1e-5;
};

/// Location handed to tau samplers; i = j = -1 off the grid.
struct GridPoint {
  int i = -1;
  int j = -1;
  double u = 0.0;
  double v = 0.0;
};

using TauSampler = std::function<Jet<2>(const GridPoint&)>;

TauSampler tau_sampler(const Expr& tau);

struct PointRecord {
  double u = 0.0;
  double v = 0.0;
  bool regular = false;
  double det = 0.0;
  double tau = 0.0;
  double a = 0.0;
  double b = 0.0;
  double mu2 = 0.0;
  std::array<double, 2> alpha{};
  std::array<double, 4> alpha_partials{};  // d_u a_u, d_v a_u, d_u a_v, d_v a_v
  std::array<double, 2> alpha_hat{};
  double dalpha = 0.0;
  LieVector<2> f;
  LieVector<2> f_hat;
  double hat_frame = 0.0;
  double pair = 0.0;
  double reconstruction = 0.0;
  double alpha_sum = 0.0;
  double involution = 0.0;
  double curvature = 0.0;
  double curvature_rel = 0.0;
  double shape_path = std::numeric_limits<double>::quiet_NaN();  // NaN when f is not immersed
  double metric = 0.0;
  double envelope = 0.0;
};

/// Full pointwise analysis; record.regular is false (and the residuals stay
/// zero) where -dxi + tau df degenerates.
PointRecord analyze_point(const LegendreFrame<2>& frame, const Jet<2>& tau, const Tolerances& tol);

struct SweepMaxima {
  double frame = 0.0;
  double hat_frame = 0.0;
  double pair = 0.0;
  double reconstruction = 0.0;
  double alpha_sum = 0.0;
  double involution = 0.0;
  double curvature = 0.0;
  double curvature_rel = 0.0;
  double shape_path = 0.0;
  double metric = 0.0;
  double envelope = 0.0;
};

struct SweepReport {
  Grid grid;
  std::vector<PointRecord> points;  // grid.index(i, j) order
  bool regular = true;
  int nonregular_count = 0;
  double min_det = std::numeric_limits<double>::infinity();
  double max_dalpha = 0.0;
  std::array<double, 2> max_dalpha_at{};
  double max_alpha = 0.0;
  bool ribaucour = false;
  SweepMaxima maxima;

  const PointRecord& at(int i, int j) const { return points[grid.index(i, j)]; }
  /// alpha with its jet partials, and alphahat (values only).
  OneForm alpha_form() const;
  OneForm alpha_hat_form() const;
};

SweepReport sweep(const ChartSpec& chart, const TauSampler& tau, const Grid& grid,
                  const Tolerances& tol = {});

struct RibaucourResidual {
  double max_dalpha = 0.0;
  std::array<double, 2> where{};
  double max_alpha = 0.0;
  bool ribaucour = false;
};

/// max |d alpha| over the grid from jet partials. Throws NotRegular at the
/// first offending grid point.
RibaucourResidual ribaucour_residual(const ChartSpec& chart, const TauSampler& tau, const Grid& grid,
                                     const Tolerances& tol = {});

}  // namespace ribau
