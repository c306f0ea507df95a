#pragma once

/// \file
/// Rectangular parameter grids, sampled fields, the finite-difference jet
/// oracle and grid-level exterior derivatives.
///
/// Sampling: periodic axes are sampled at cell centres u0 + (i + 1/2) h with
/// h = span / n (no duplicated seam); non-periodic axes at the n nodes
/// u0 + i h with h = span / (n - 1), endpoints included.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ribau/charts.hpp"
#include "ribau/jet.hpp"

namespace ribau {

struct Grid {
  Domain domain;
  int nu = 64;
  int nv = 64;

  Grid() = default;
  Grid(Domain d, int nu, int nv);

  double hu() const;
  double hv() const;
  double u(int i) const;
  double v(int j) const;
  std::array<double, 2> point(int i, int j) const { return {u(i), v(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j);
  }
};

/// Row-major (i over u, j over v) field with k components per point.
class GridField {
 public:
  GridField() = default;
  GridField(Grid grid, int components, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  int components() const { return k_; }
  double& operator()(int i, int j, int c = 0) { return data_[grid_.index(i, j) * k_ + c]; }
  double operator()(int i, int j, int c = 0) const { return data_[grid_.index(i, j) * k_ + c]; }
  std::span<const double> data() const { return data_; }
  double max_abs(int c) const;

 private:
  Grid grid_;
  int k_ = 1;
  std::vector<double> data_;
};

/// A 1-form a_u du + a_v dv sampled on a grid. partials, when present,
/// holds (d_u a_u, d_v a_u, d_u a_v, d_v a_v) per point.
struct OneForm {
  GridField alpha;     // 2 components
  GridField partials;  // 4 components or empty

  bool has_partials() const { return partials.components() == 4 && !partials.data().empty(); }
};

using ScalarSampler = std::function<double(const std::array<double, 2>&)>;

/// Central-difference 2-jet of a scalar function: first partials and
/// second partials, both O(h^2). h must lie in [1e-6, 1e-1].
Jet<2> fd_jet_oracle(const ScalarSampler& sampler, std::array<double, 2> point, double h);

/// Same with a domain check: throws StencilOutOfDomain when the stencil
/// leaves a non-periodic axis.
Jet<2> fd_jet_oracle(const ScalarSampler& sampler, std::array<double, 2> point, double h,
                     const Domain& domain);

/// Least-squares slope of log(error) against log(h).
double empirical_order(std::span<const double> steps, std::span<const double> errors);

struct CellField {
  int nu = 0;
  int nv = 0;
  std::vector<double> values;  // row-major, nu x nv cells

  double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * nv + j]; }
};

struct ExteriorDerivative {
  CellField density;                 // circulation / cell area, O(h^2) estimate of d alpha
  double max_abs_density = 0.0;
  double max_abs_circulation = 0.0;
  std::vector<double> period_u;      // per row j: closed loop along u (periodic u only)
  std::vector<double> period_v;      // per column i: closed loop along v (periodic v only)
  double max_abs_period = 0.0;
};

/// Trapezoid circulations of alpha around each elementary plaquette (cells
/// wrap across periodic seams) and around the period generators.
ExteriorDerivative grid_exterior_derivative(const OneForm& alpha);

}  // namespace ribau
