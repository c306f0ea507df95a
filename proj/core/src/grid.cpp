#include "ribau/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "ribau/errors.hpp"

namespace ribau {

Grid::Grid(Domain d, int nu_, int nv_) : domain(d), nu(nu_), nv(nv_) {
  if (domain.empty()) throw Error("grid domain is empty");
  if (nu < 2 || nv < 2) throw Error(fmt::format("grid {}x{} too small", nu, nv));
}

double Grid::hu() const { return domain.span_u() / (domain.periodic_u ? nu : nu - 1); }
double Grid::hv() const { return domain.span_v() / (domain.periodic_v ? nv : nv - 1); }

double Grid::u(int i) const {
  return domain.u0 + (domain.periodic_u ? (i + 0.5) : static_cast<double>(i)) * hu();
}
double Grid::v(int j) const {
  return domain.v0 + (domain.periodic_v ? (j + 0.5) : static_cast<double>(j)) * hv();
}

GridField::GridField(Grid grid, int components, double fill)
    : grid_(grid), k_(components), data_(grid.size() * static_cast<std::size_t>(components), fill) {}

double GridField::max_abs(int c) const {
  double m = 0.0;
  for (std::size_t p = 0; p < grid_.size(); ++p) m = std::max(m, std::abs(data_[p * k_ + c]));
  return m;
}

Jet<2> fd_jet_oracle(const ScalarSampler& sampler, std::array<double, 2> x, double h) {
  if (!(h >= 1e-6 && h <= 1e-1)) throw Error(fmt::format("oracle step {} outside [1e-6, 1e-1]", h));
  auto at = [&](double du, double dv) { return sampler({x[0] + du, x[1] + dv}); };
  Jet<2> j;
  const double f0 = at(0, 0);
  const double fpu = at(h, 0), fmu = at(-h, 0), fpv = at(0, h), fmv = at(0, -h);
  j.value = f0;
  j.grad[0] = (fpu - fmu) / (2 * h);
  j.grad[1] = (fpv - fmv) / (2 * h);
  j.d2(0, 0) = (fpu - 2 * f0 + fmu) / (h * h);
  j.d2(1, 1) = (fpv - 2 * f0 + fmv) / (h * h);
  j.d2(0, 1) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
  return j;
}

Jet<2> fd_jet_oracle(const ScalarSampler& sampler, std::array<double, 2> x, double h,
                     const Domain& d) {
  const bool u_ok = d.periodic_u || (x[0] - h >= d.u0 && x[0] + h <= d.u1);
  const bool v_ok = d.periodic_v || (x[1] - h >= d.v0 && x[1] + h <= d.v1);
  if (!u_ok || !v_ok) {
    throw StencilOutOfDomain(
        fmt::format("stencil of width {} at ({}, {}) leaves the domain", h, x[0], x[1]));
  }
  return fd_jet_oracle(sampler, x, h);
}

double empirical_order(std::span<const double> steps, std::span<const double> errors) {
  const std::size_t n = std::min(steps.size(), errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(steps[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ExteriorDerivative grid_exterior_derivative(const OneForm& form) {
  const GridField& a = form.alpha;
  const Grid& g = a.grid();
  if (g.nu < 4 || g.nv < 4) throw Error("grid_exterior_derivative needs at least a 4x4 grid");
  const bool pu = g.domain.periodic_u, pv = g.domain.periodic_v;
  const int cu = pu ? g.nu : g.nu - 1;
  const int cv = pv ? g.nv : g.nv - 1;
  const double hu = g.hu(), hv = g.hv();

  ExteriorDerivative out;
  out.density = CellField{cu, cv, std::vector<double>(static_cast<std::size_t>(cu) * cv)};
  for (int i = 0; i < cu; ++i) {
    const int i1 = (i + 1) % g.nu;
    for (int j = 0; j < cv; ++j) {
      const int j1 = (j + 1) % g.nv;
      // counter-clockwise: bottom (+u), right (+v), top (-u), left (-v)
      const double circ = 0.5 * hu * (a(i, j, 0) + a(i1, j, 0)) +
                          0.5 * hv * (a(i1, j, 1) + a(i1, j1, 1)) -
                          0.5 * hu * (a(i, j1, 0) + a(i1, j1, 0)) -
                          0.5 * hv * (a(i, j, 1) + a(i, j1, 1));
      const double density = circ / (hu * hv);
      out.density.values[static_cast<std::size_t>(i) * cv + j] = density;
      out.max_abs_density = std::max(out.max_abs_density, std::abs(density));
      out.max_abs_circulation = std::max(out.max_abs_circulation, std::abs(circ));
    }
  }
  if (pu) {
    for (int j = 0; j < g.nv; ++j) {
      double s = 0.0;
      for (int i = 0; i < g.nu; ++i) s += 0.5 * hu * (a(i, j, 0) + a((i + 1) % g.nu, j, 0));
      out.period_u.push_back(s);
      out.max_abs_period = std::max(out.max_abs_period, std::abs(s));
    }
  }
  if (pv) {
    for (int i = 0; i < g.nu; ++i) {
      double s = 0.0;
      for (int j = 0; j < g.nv; ++j) s += 0.5 * hv * (a(i, j, 1) + a(i, (j + 1) % g.nv, 1));
      out.period_v.push_back(s);
      out.max_abs_period = std::max(out.max_abs_period, std::abs(s));
    }
  }
  return out;
}

}  // namespace ribau
