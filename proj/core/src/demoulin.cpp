#include "ribau/demoulin.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ribau {

namespace {

// Integral of the component c of alpha from node (i, j) to the next node
// along axis c.
struct Segments {
  const OneForm& form;
  double hu, hv;

  double u(int i, int i1, int j) const {
    const GridField& a = form.alpha;
    double s = 0.5 * hu * (a(i, j, 0) + a(i1, j, 0));
    if (form.has_partials()) s += hu * hu / 12.0 * (form.partials(i, j, 0) - form.partials(i1, j, 0));
    return s;
  }
  double v(int i, int j, int j1) const {
    const GridField& a = form.alpha;
    double s = 0.5 * hv * (a(i, j, 1) + a(i, j1, 1));
    if (form.has_partials()) s += hv * hv / 12.0 * (form.partials(i, j, 3) - form.partials(i, j1, 3));
    return s;
  }
};

}  // namespace

Potential integrate_potential(const OneForm& alpha, std::array<int, 2> base, double tol) {
  const Grid& g = alpha.alpha.grid();
  if (base[0] < 0 || base[0] >= g.nu || base[1] < 0 || base[1] >= g.nv) {
    throw Error(fmt::format("potential base ({}, {}) outside the grid", base[0], base[1]));
  }
  const Segments seg{alpha, g.hu(), g.hv()};
  Potential p;
  p.base = base;
  p.values = GridField(g, 1);
  GridField& t = p.values;
  const int i0 = base[0], j0 = base[1];
  for (int i = i0 + 1; i < g.nu; ++i) t(i, j0) = t(i - 1, j0) - seg.u(i - 1, i, j0);
  for (int i = i0 - 1; i >= 0; --i) t(i, j0) = t(i + 1, j0) + seg.u(i, i + 1, j0);
  for (int i = 0; i < g.nu; ++i) {
    for (int j = j0 + 1; j < g.nv; ++j) t(i, j) = t(i, j - 1) - seg.v(i, j - 1, j);
    for (int j = j0 - 1; j >= 0; --j) t(i, j) = t(i, j + 1) + seg.v(i, j, j + 1);
  }

  const bool pu = g.domain.periodic_u, pv = g.domain.periodic_v;
  const int cu = pu ? g.nu : g.nu - 1;
  const int cv = pv ? g.nv : g.nv - 1;
  for (int i = 0; i < cu; ++i) {
    const int i1 = (i + 1) % g.nu;
    for (int j = 0; j < cv; ++j) {
      const int j1 = (j + 1) % g.nv;
      const double circ = seg.u(i, i1, j) + seg.v(i1, j, j1) - seg.u(i, i1, j1) - seg.v(i, j, j1);
      p.loop_residual = std::max(p.loop_residual, std::abs(circ));
    }
  }
  if (pu) {
    for (int j = 0; j < g.nv; ++j) {
      double s = 0.0;
      for (int i = 0; i < g.nu; ++i) s += seg.u(i, (i + 1) % g.nu, j);
      p.period_residual = std::max(p.period_residual, std::abs(s));
    }
  }
  if (pv) {
    for (int i = 0; i < g.nu; ++i) {
      double s = 0.0;
      for (int j = 0; j < g.nv; ++j) s += seg.v(i, j, (j + 1) % g.nv);
      p.period_residual = std::max(p.period_residual, std::abs(s));
    }
  }
  const double worst = std::max(p.loop_residual, p.period_residual);
  if (!(worst <= tol)) {
    throw PathDependence(fmt::format("alpha has no single-valued potential (loop residual {:.3e}, "
                                     "period residual {:.3e})",
                                     p.loop_residual, p.period_residual),
                         worst);
  }
  return p;
}

std::vector<ROperator<2>> r_operator_field(const ChartSpec& chart, const TauSampler& tau,
                                           const Grid& grid, const Tolerances& tol) {
  std::vector<ROperator<2>> out;
  out.reserve(grid.size());
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const auto p = grid.point(i, j);
      const LegendreFrame<2> frame = eval_chart(chart, p, tol.contact);
      const TransformResult<2> res = transform(frame, tau(GridPoint{i, j, p[0], p[1]}), tol.singular);
      out.push_back(r_operator(frame, res, tol.singular));
    }
  }
  return out;
}

BianchiReport bianchi_check(std::span<const ROperator<2>> r0, std::span<const ROperator<2>> r1,
                            const Grid& grid) {
  if (r0.size() != grid.size() || r1.size() != grid.size()) {
    throw Error("bianchi_check: r-operator fields do not match the grid");
  }
  BianchiReport rep;
  rep.where = grid.point(0, 0);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const std::size_t k = grid.index(i, j);
      const double c = commutator_norm<2>(r0[k].r, r1[k].r);
      if (c > rep.commutator_norm) {
        rep.commutator_norm = c;
        rep.where = grid.point(i, j);
      }
      const double w = lie_inner(r0[k].image[0], r1[k].image[1]) - lie_inner(r0[k].image[1], r1[k].image[0]);
      rep.wedge_norm = std::max(rep.wedge_norm, std::abs(w));
      rep.max_relation = std::max({rep.max_relation, r0[k].relation_residual, r1[k].relation_residual});
      rep.max_symmetry = std::max({rep.max_symmetry, r0[k].symmetry_residual, r1[k].symmetry_residual});
    }
  }
  return rep;
}

Jet<2> DemoulinFamily::tilde_jet(int which, int i, int j) const {
  const Potential& pot = which == 0 ? tilde0 : tilde1;
  const PointRecord& rec = (which == 0 ? sweep0 : sweep1).at(i, j);
  Jet<2> t;
  t.value = pot.values(i, j);
  t.grad = {-rec.alpha[0], -rec.alpha[1]};
  const auto& d = rec.alpha_partials;
  t.d2(0, 0) = -d[0];
  t.d2(1, 1) = -d[3];
  t.d2(0, 1) = -0.5 * (d[1] + d[2]);
  return t;
}

DemoulinFamily make_demoulin_family(const ChartSpec& chart, const TauSampler& tau0,
                                    const TauSampler& tau1, const Grid& grid,
                                    const Tolerances& tol) {
  DemoulinFamily fam;
  fam.chart = chart;
  fam.grid = grid;
  fam.tol = tol;
  fam.tau0.reserve(grid.size());
  fam.tau1.reserve(grid.size());
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const GridPoint gp{i, j, grid.u(i), grid.v(j)};
      fam.tau0.push_back(tau0(gp));
      fam.tau1.push_back(tau1(gp));
      min_gap = std::min(min_gap, std::abs(fam.tau0.back().value - fam.tau1.back().value));
    }
  }
  if (!(min_gap > 1e-8)) {
    throw NotPointwiseDistinct(fmt::format("tau0 and tau1 come within {:.3e} of each other", min_gap));
  }
  auto from_grid = [&](const std::vector<Jet<2>>& v) {
    return TauSampler([&v, &grid](const GridPoint& p) { return v[grid.index(p.i, p.j)]; });
  };
  fam.sweep0 = sweep(chart, from_grid(fam.tau0), grid, tol);
  fam.sweep1 = sweep(chart, from_grid(fam.tau1), grid, tol);
  for (const SweepReport* s : {&fam.sweep0, &fam.sweep1}) {
    if (!s->ribaucour) {
      throw NotRibaucour(s->regular ? fmt::format("d alpha reaches {:.3e}", s->max_dalpha)
                                    : std::string("transform is not regular on the whole grid"),
                         s->max_dalpha);
    }
  }
  fam.tilde0 = integrate_potential(fam.sweep0.alpha_form(), {0, 0}, tol.loop);
  fam.tilde1 = integrate_potential(fam.sweep1.alpha_form(), {0, 0}, tol.loop);
  return fam;
}

std::array<double, 2> exact_cos_sin(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  if (std::abs(c) < 1e-15) c = 0.0;
  if (std::abs(s) < 1e-15) s = 0.0;
  return {c, s};
}

Jet<2> member_jet(const DemoulinFamily& family, double theta, int i, int j) {
  const auto [c, s] = exact_cos_sin(theta);
  const std::size_t k = family.grid.index(i, j);
  if (s == 0.0) return family.tau0[k];
  if (c == 0.0) return family.tau1[k];
  const Jet<2> w0 = c * exp(family.tilde_jet(1, i, j));
  const Jet<2> w1 = s * exp(family.tilde_jet(0, i, j));
  return (w0 * family.tau0[k] + w1 * family.tau1[k]) / (w0 + w1);
}

namespace {

double mask_threshold(const DemoulinFamily& family) {
  double m0 = -std::numeric_limits<double>::infinity(), m1 = m0;
  for (double x : family.tilde0.values.data()) m0 = std::max(m0, x);
  for (double x : family.tilde1.values.data()) m1 = std::max(m1, x);
  return family.tol.mask * (std::exp(m0) + std::exp(m1));
}

}  // namespace

DemoulinMember demoulin_tau(const DemoulinFamily& family, double theta) {
  const Grid& g = family.grid;
  const auto [c, s] = exact_cos_sin(theta);
  const double eps = mask_threshold(family);
  DemoulinMember m;
  m.theta = theta;
  m.tau = GridField(g, 1);
  m.mask.assign(g.size(), 0);
  std::size_t masked = 0;
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const double denom = c * std::exp(family.tilde1.values(i, j)) + s * std::exp(family.tilde0.values(i, j));
      if (std::abs(denom) < eps) {
        m.mask[g.index(i, j)] = 1;
        m.tau(i, j) = std::numeric_limits<double>::quiet_NaN();
        ++masked;
      } else {
        m.tau(i, j) = member_jet(family, theta, i, j).value;
      }
    }
  }
  m.masked_fraction = static_cast<double>(masked) / static_cast<double>(g.size());
  if (m.masked_fraction > 0.5) {
    throw FullyMasked(fmt::format("theta = {}: denominator vanishes on {:.1f}% of the grid", theta,
                                  100.0 * m.masked_fraction),
                      m.masked_fraction);
  }
  return m;
}

TauSampler member_sampler(const DemoulinFamily& family, double theta) {
  const DemoulinMember m = demoulin_tau(family, theta);
  return [&family, theta, mask = m.mask](const GridPoint& p) {
    if (p.i < 0 || p.j < 0) throw Error("family members are only defined on the family grid");
    if (mask[family.grid.index(p.i, p.j)]) {
      Jet<2> nan;
      nan.value = std::numeric_limits<double>::quiet_NaN();
      return nan;
    }
    return member_jet(family, theta, p.i, p.j);
  };
}

void verify_member(const DemoulinFamily& family, DemoulinMember& member) {
  const Grid& g = family.grid;
  member.nonregular = 0;
  member.max_dalpha = 0.0;
  member.max_alpha = 0.0;
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      if (member.mask[g.index(i, j)]) continue;
      const LegendreFrame<2> frame = eval_chart(family.chart, g.point(i, j), family.tol.contact);
      try {
        const TransformResult<2> r = transform(frame, member_jet(family, member.theta, i, j), family.tol.singular);
        member.max_dalpha = std::max(member.max_dalpha, r.max_abs_dalpha());
        member.max_alpha = std::max(member.max_alpha, r.max_abs_alpha());
      } catch (const NotRegular&) {
        ++member.nonregular;
      }
    }
  }
  member.ribaucour = member.max_dalpha < family.tol.closedness * (1.0 + member.max_alpha);
}

ParallelSections parallel_sections(const DemoulinFamily& family, bool include_potential_factor) {
  const Grid& g = family.grid;
  ParallelSections out{GridField(g, 1), GridField(g, 1), 0.0};
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t k = g.index(i, j);
      const std::array<Jet<2>, 2> tau{family.tau0[k], family.tau1[k]};
      if (tau[0].value == tau[1].value) {
        throw NotPointwiseDistinct(fmt::format("tau0 = tau1 at grid point ({}, {})", i, j));
      }
      const LegendreFrame<2> frame = eval_chart(family.chart, g.point(i, j), family.tol.contact);
      std::array<LieVector<2>, 2> hat;
      for (int s = 0; s < 2; ++s) {
        hat[s] = values(transform(frame, tau[s], family.tol.singular).f_hat) + t0<2>();
      }
      for (int s = 0; s < 2; ++s) {
        const int o = 1 - s;
        Jet<2> scale = reciprocal(tau[s] - tau[o]);
        if (include_potential_factor) scale = exp(family.tilde_jet(o, i, j)) * scale;
        (s == 0 ? out.u0 : out.u1)(i, j) = scale.value;
        const LieJet<2> sigma = scale * (frame.xi - tau[s] * frame.f - tau[s] * t0_jet<2>() + t1_jet<2>());
        for (int d = 0; d < 2; ++d) {
          out.residual = std::max(out.residual, std::abs(lie_inner(partial_values(sigma, d), hat[o])));
        }
      }
    }
  }
  return out;
}

namespace {

// Everything the dual-family system needs at one point of the chart.
struct DualForms {
  std::array<double, 2> drive{};  // alpha_1 - alphahat_0 + d ln|tau1 - tau0|
  std::array<double, 2> gamma{};
  std::array<double, 2> alpha0{};
  std::array<double, 4> alpha0_partials{};
  double tau0 = 0.0;
  double a0 = 0.0;
};

class DualEvaluator {
 public:
  DualEvaluator(const ChartSpec& chart, const TauSampler& tau0, const TauSampler& tau1,
                const Tolerances& tol)
      : chart_(chart), tau0_(tau0), tau1_(tau1), tol_(tol) {}

  DualForms at(const GridPoint& p) const {
    const LegendreFrame<2> frame = eval_chart(chart_, {p.u, p.v}, tol_.contact);
    const Jet<2> s0 = tau0_(p), s1 = tau1_(p);
    const double gap = s1.value - s0.value;
    if (gap == 0.0) {
      throw NotPointwiseDistinct(fmt::format("tau0 = tau1 at ({}, {})", p.u, p.v));
    }
    const TransformResult<2> r0 = transform(frame, s0, tol_.singular);
    const TransformResult<2> r1 = transform(frame, s1, tol_.singular);
    const std::array<double, 2> ah0 = alpha_hat(frame, r0);
    const LieVector<2> e0 = values(r0.f_hat) + t0<2>();
    const LieVector<2> e1 = values(r1.f_hat) + t0<2>();
    DualForms out;
    out.tau0 = s0.value;
    out.a0 = r0.a.value;
    for (int k = 0; k < 2; ++k) {
      out.drive[k] = r1.alpha[k].value - ah0[k] + (s1.grad[k] - s0.grad[k]) / gap;
      const LieVector<2> beta = partial_values(r0.f_hat, k) - ah0[k] * e0;
      out.gamma[k] = lie_inner(beta, e1) / (gap * (r1.a.value - 1.0));
      out.alpha0[k] = r0.alpha[k].value;
    }
    out.alpha0_partials = {r0.alpha[0].grad[0], r0.alpha[0].grad[1], r0.alpha[1].grad[0],
                           r0.alpha[1].grad[1]};
    return out;
  }

 private:
  const ChartSpec& chart_;
  const TauSampler& tau0_;
  const TauSampler& tau1_;
  const Tolerances& tol_;
};

void check_offset(double w, double u, double v) {
  const double gap = std::exp(w);
  if (!(gap >= 1e-8 && gap <= 1e8)) {
    throw BlowUp(fmt::format("|tau0 - tauhat0| = {:.3e} at ({}, {})", gap, u, v));
  }
}

}  // namespace

DualFamilyResult dual_family_step(const ChartSpec& chart, const TauSampler& tau0,
                                  const TauSampler& tau1, const Grid& patch,
                                  const Tolerances& tol, DualFamilyOptions opts) {
  const Grid& g = patch;
  if (g.domain.periodic_u || g.domain.periodic_v) {
    throw Error("dual_family_step needs a simply connected, non-periodic patch");
  }
  if (opts.initial_offset == 0.0 || !std::isfinite(opts.initial_offset)) {
    throw IllPosed("initial offset tau0 - tauhat0 must be finite and nonzero");
  }
  const int i0 = opts.base[0], j0 = opts.base[1];
  if (i0 < 0 || i0 >= g.nu || j0 < 0 || j0 >= g.nv) throw Error("dual-family base outside the patch");
  const double sgn = opts.initial_offset > 0 ? 1.0 : -1.0;
  const double hu = g.hu(), hv = g.hv();

  const DualEvaluator eval(chart, tau0, tau1, tol);
  std::vector<DualForms> node(g.size()), mid_u(g.size()), mid_v(g.size());
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const std::size_t k = g.index(i, j);
      node[k] = eval.at(GridPoint{i, j, g.u(i), g.v(j)});
      if (i + 1 < g.nu) mid_u[k] = eval.at(GridPoint{-1, -1, g.u(i) + 0.5 * hu, g.v(j)});
      if (j + 1 < g.nv) mid_v[k] = eval.at(GridPoint{-1, -1, g.u(i), g.v(j) + 0.5 * hv});
    }
  }

  // one RK4 step of w' = drive_c + sgn e^w gamma_c between adjacent nodes
  auto step = [&](double w, const DualForms& a, const DualForms& m, const DualForms& b, int c, double h) {
    auto f = [&](const DualForms& x, double y) { return x.drive[c] + sgn * std::exp(y) * x.gamma[c]; };
    const double k1 = f(a, w);
    const double k2 = f(m, w + 0.5 * h * k1);
    const double k3 = f(m, w + 0.5 * h * k2);
    const double k4 = f(b, w + h * k3);
    return w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  auto along_u = [&](GridField& w, int j, int from) {
    for (int i = from + 1; i < g.nu; ++i) {
      w(i, j) = step(w(i - 1, j), node[g.index(i - 1, j)], mid_u[g.index(i - 1, j)], node[g.index(i, j)], 0, hu);
      check_offset(w(i, j), g.u(i), g.v(j));
    }
    for (int i = from - 1; i >= 0; --i) {
      w(i, j) = step(w(i + 1, j), node[g.index(i + 1, j)], mid_u[g.index(i, j)], node[g.index(i, j)], 0, -hu);
      check_offset(w(i, j), g.u(i), g.v(j));
    }
  };
  auto along_v = [&](GridField& w, int i, int from) {
    for (int j = from + 1; j < g.nv; ++j) {
      w(i, j) = step(w(i, j - 1), node[g.index(i, j - 1)], mid_v[g.index(i, j - 1)], node[g.index(i, j)], 1, hv);
      check_offset(w(i, j), g.u(i), g.v(j));
    }
    for (int j = from - 1; j >= 0; --j) {
      w(i, j) = step(w(i, j + 1), node[g.index(i, j + 1)], mid_v[g.index(i, j)], node[g.index(i, j)], 1, -hv);
      check_offset(w(i, j), g.u(i), g.v(j));
    }
  };

  const double w_base = std::log(std::abs(opts.initial_offset));
  check_offset(w_base, g.u(i0), g.v(j0));
  GridField w_row(g, 1), w_col(g, 1);
  w_row(i0, j0) = w_base;
  along_u(w_row, j0, i0);
  for (int i = 0; i < g.nu; ++i) along_v(w_row, i, j0);
  w_col(i0, j0) = w_base;
  along_v(w_col, i0, j0);
  for (int j = 0; j < g.nv; ++j) along_u(w_col, j, i0);

  DualFamilyResult out;
  out.grid = g;
  out.gamma = GridField(g, 2);
  out.tau_hat0 = GridField(g, 1);
  out.tau_hat0_column_first = GridField(g, 1);
  out.v = GridField(g, 1);
  OneForm alpha0{GridField(g, 2), GridField(g, 4)};
  OneForm beta{GridField(g, 2), GridField()};
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const DualForms& n = node[g.index(i, j)];
      out.tau_hat0(i, j) = n.tau0 - sgn * std::exp(w_row(i, j));
      out.tau_hat0_column_first(i, j) = n.tau0 - sgn * std::exp(w_col(i, j));
      out.consistency = std::max(out.consistency, std::abs(out.tau_hat0(i, j) - out.tau_hat0_column_first(i, j)));
      for (int c = 0; c < 2; ++c) {
        out.gamma(i, j, c) = n.gamma[c];
        alpha0.alpha(i, j, c) = n.alpha0[c];
        beta.alpha(i, j, c) = sgn * std::exp(w_row(i, j)) * n.gamma[c];
      }
      for (int c = 0; c < 4; ++c) alpha0.partials(i, j, c) = n.alpha0_partials[c];
    }
  }

  // d(e^w gamma) = e^w (dw ^ gamma + d gamma) and dw ^ gamma = drive ^ gamma,
  // with d gamma from central differences of the pointwise gamma.
  const double du = 1e-4 * g.domain.span_u(), dv = 1e-4 * g.domain.span_v();
  const Domain& cd = chart.domain;
  auto inside = [&](double u, double v) {
    return (cd.periodic_u || (u >= cd.u0 && u <= cd.u1)) && (cd.periodic_v || (v >= cd.v0 && v <= cd.v1));
  };
  auto partial = [&](double u, double v, int axis, int comp) {
    const double h = axis == 0 ? du : dv;
    auto g_at = [&](double s) {
      const GridPoint p{-1, -1, axis == 0 ? u + s : u, axis == 0 ? v : v + s};
      return eval.at(p).gamma[comp];
    };
    const bool fwd = axis == 0 ? inside(u + h, v) : inside(u, v + h);
    const bool bwd = axis == 0 ? inside(u - h, v) : inside(u, v - h);
    if (fwd && bwd) return (g_at(h) - g_at(-h)) / (2 * h);
    if (fwd) return (-3 * g_at(0) + 4 * g_at(h) - g_at(2 * h)) / (2 * h);
    return (3 * g_at(0) - 4 * g_at(-h) + g_at(-2 * h)) / (2 * h);
  };
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const DualForms& n = node[g.index(i, j)];
      const double dgamma = partial(g.u(i), g.v(j), 0, 1) - partial(g.u(i), g.v(j), 1, 0);
      const double wedge = n.drive[0] * n.gamma[1] - n.drive[1] * n.gamma[0];
      out.gamma_identity_residual =
          std::max(out.gamma_identity_residual, std::exp(w_row(i, j)) * std::abs(wedge + dgamma));
    }
  }
  out.gamma_identity_circulation = grid_exterior_derivative(beta).max_abs_density;

  // ln|v| = -w - ln(1 - a0) - tilde0, normalized to v(base) = 1
  const Potential tilde0 = integrate_potential(alpha0, opts.base, tol.loop);
  auto log_v = [&](int i, int j) {
    return -w_row(i, j) - std::log(1.0 - node[g.index(i, j)].a0) - tilde0.values(i, j);
  };
  const double ref = log_v(i0, j0);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) out.v(i, j) = std::exp(log_v(i, j) - ref);

  if (!(out.consistency <= tol.dual_consistency)) {
    throw PathDependence(fmt::format("row-first and column-first tauhat0 differ by {:.3e}", out.consistency),
                         out.consistency);
  }
  return out;
}

}  // namespace ribau
