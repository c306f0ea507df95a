#pragma once

/// \file
/// Jet derivatives against the finite-difference oracle: error and
/// empirical convergence order over a ladder of steps.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ribau/charts.hpp"
#include "ribau/expr.hpp"

namespace ribau {

struct OracleCase {
  ChartSpec chart;
  Expr tau;
  std::array<double, 2> point{};
};

struct OracleResult {
  std::vector<double> steps;
  std::vector<double> first_errors;   // max |jet grad - fd grad| over tau, f, xi and a
  std::vector<double> second_errors;  // max |jet hessian - fd hessian| over tau, f and xi
  double first_order = 0.0;
  double second_order = 0.0;
  bool transform_checked = false;     // false when the transform is singular at the point
};

inline const std::vector<double> kOracleSteps{1e-2, 5e-3, 2.5e-3};

OracleResult oracle_convergence(const OracleCase& c, const std::vector<double>& steps = kOracleSteps);

/// Deterministic random cases: clifford tori with r in [0.4, 0.85], some of
/// them pushed to a parallel map, random smooth tau and interior points.
std::vector<OracleCase> random_oracle_cases(std::uint64_t seed, int count);

}  // namespace ribau
