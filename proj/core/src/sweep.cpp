#include "ribau/sweep.hpp"

#include <algorithm>
#include <cmath>

namespace ribau {

TauSampler tau_sampler(const Expr& tau) {
  return [tau](const GridPoint& p) { return evaluate_jet(tau, p.u, p.v); };
}

PointRecord analyze_point(const LegendreFrame<2>& frame, const Jet<2>& tau, const Tolerances& tol) {
  PointRecord rec;
  rec.u = frame.point[0];
  rec.v = frame.point[1];
  rec.tau = tau.value;
  rec.f = values(frame.f);
  TransformResult<2> r;
  try {
    r = transform(frame, tau, tol.singular);
  } catch (const NotRegular&) {
    rec.regular = false;
    return rec;
  }
  rec.regular = true;
  rec.det = r.metric.det_value;
  rec.a = r.a.value;
  rec.b = r.b.value;
  rec.mu2 = r.mu2.value;
  rec.alpha = {r.alpha[0].value, r.alpha[1].value};
  rec.alpha_partials = {r.alpha[0].grad[0], r.alpha[0].grad[1], r.alpha[1].grad[0], r.alpha[1].grad[1]};
  rec.dalpha = r.dalpha(0, 1);
  rec.f_hat = values(r.f_hat);
  rec.hat_frame = r.residuals.hat_frame();
  rec.envelope = std::max({r.residuals.envelope, r.residuals.f_check_perp, r.residuals.mu2});
  rec.pair = pair_residual(frame, r);

  const Reconstruction<2> back =
      reconstruct(frame, r, std::nullopt, std::numeric_limits<double>::infinity(), tol.singular);
  rec.involution = back.involution;
  rec.reconstruction = std::max(back.reconstruction, back.mu_length);
  rec.metric = back.metric;
  rec.alpha_hat = back.alpha_hat;

  const CurvatureCheck<2> curv = curvature_identity(frame, r);
  rec.curvature = curv.residual;
  rec.curvature_rel = curv.relative;
  // both written forms of alphahat must agree as well
  const auto ah = alpha_hat(frame, r);
  rec.alpha_sum = std::max({curv.alpha_sum, std::abs(ah[0] - back.alpha_hat[0]),
                       std::abs(ah[1] - back.alpha_hat[1])});

  try {
    const LieJet<2> fc = shape_operator_path(frame, tau, tol.singular);
    rec.shape_path = max_abs(values(fc) - values(r.f_check));
  } catch (const NotHypersurface&) {
    rec.shape_path = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

SweepReport sweep(const ChartSpec& chart, const TauSampler& tau, const Grid& grid,
                  const Tolerances& tol) {
  SweepReport rep;
  rep.grid = grid;
  rep.points.resize(grid.size());
  bool have_max = false;
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const auto p = grid.point(i, j);
      const LegendreFrame<2> frame = eval_chart(chart, p, tol.contact);
      const Jet<2> t = tau(GridPoint{i, j, p[0], p[1]});
      PointRecord rec = analyze_point(frame, t, tol);
      auto& m = rep.maxima;
      m.frame = std::max(m.frame, frame.certificate.max_residual());
      if (!rec.regular) {
        rep.regular = false;
        ++rep.nonregular_count;
        rep.min_det = 0.0;
      } else {
        rep.min_det = std::min(rep.min_det, std::abs(rec.det));
        if (!have_max || std::abs(rec.dalpha) > rep.max_dalpha) {
          have_max = true;
          rep.max_dalpha = std::abs(rec.dalpha);
          rep.max_dalpha_at = {rec.u, rec.v};
        }
        rep.max_alpha = std::max({rep.max_alpha, std::abs(rec.alpha[0]), std::abs(rec.alpha[1])});
        m.hat_frame = std::max(m.hat_frame, rec.hat_frame);
        m.pair = std::max(m.pair, rec.pair);
        m.reconstruction = std::max(m.reconstruction, rec.reconstruction);
        m.alpha_sum = std::max(m.alpha_sum, rec.alpha_sum);
        m.involution = std::max(m.involution, rec.involution);
        m.curvature = std::max(m.curvature, rec.curvature);
        m.curvature_rel = std::max(m.curvature_rel, rec.curvature_rel);
        if (!std::isnan(rec.shape_path)) m.shape_path = std::max(m.shape_path, rec.shape_path);
        m.metric = std::max(m.metric, rec.metric);
        m.envelope = std::max(m.envelope, rec.envelope);
      }
      rep.points[grid.index(i, j)] = rec;
    }
  }
  rep.ribaucour = rep.regular && rep.max_dalpha < tol.closedness * (1.0 + rep.max_alpha);
  return rep;
}

OneForm SweepReport::alpha_form() const {
  OneForm form{GridField(grid, 2), GridField(grid, 4)};
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const auto& p = at(i, j);
      form.alpha(i, j, 0) = p.alpha[0];
      form.alpha(i, j, 1) = p.alpha[1];
      for (int c = 0; c < 4; ++c) form.partials(i, j, c) = p.alpha_partials[c];
    }
  }
  return form;
}

OneForm SweepReport::alpha_hat_form() const {
  OneForm form{GridField(grid, 2), GridField()};
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      form.alpha(i, j, 0) = at(i, j).alpha_hat[0];
      form.alpha(i, j, 1) = at(i, j).alpha_hat[1];
    }
  }
  return form;
}

RibaucourResidual ribaucour_residual(const ChartSpec& chart, const TauSampler& tau, const Grid& grid,
                                     const Tolerances& tol) {
  RibaucourResidual out;
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const auto p = grid.point(i, j);
      const LegendreFrame<2> frame = eval_chart(chart, p, tol.contact);
      const TransformResult<2> r = transform(frame, tau(GridPoint{i, j, p[0], p[1]}), tol.singular);
      const double d = r.max_abs_dalpha();
      if (d > out.max_dalpha || (i == 0 && j == 0)) {
        out.max_dalpha = d;
        out.where = p;
      }
      out.max_alpha = std::max(out.max_alpha, r.max_abs_alpha());
    }
  }
  out.ribaucour = out.max_dalpha < tol.closedness * (1.0 + out.max_alpha);
  return out;
}

}  // namespace ribau
