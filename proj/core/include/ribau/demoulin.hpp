#pragma once

/// \file
/// Bianchi permutability: potentials of closed alpha, r-operators and the
/// commutator test, Demoulin families of Ribaucour functions, parallel
/// sections and the dual-family system.
///
/// Gauge: potentials vanish at their base point and the parallel-section
/// constants are C0 = C1 = 1. Any other choice only reparametrizes theta.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "ribau/errors.hpp"
#include "ribau/grid.hpp"
#include "ribau/ribaucour.hpp"
#include "ribau/sweep.hpp"

namespace ribau {

/// tilde with alpha = -d tilde, by endpoint-corrected trapezoid integration
/// along the base row and then along every column.
struct Potential {
  GridField values;
  std::array<int, 2> base{0, 0};
  double loop_residual = 0.0;    // max |circulation| around elementary cells
  double period_residual = 0.0;  // max |circulation| around periodic generators
};

/// Integrates a closed 1-form. With alpha.partials present each segment uses
/// h/2 (a0 + a1) + h^2/12 (a0' - a1'), otherwise the plain trapezoid rule.
/// Throws PathDependence when a cell or period circulation exceeds tol.
Potential integrate_potential(const OneForm& alpha, std::array<int, 2> base = {0, 0},
                              double tol = 1e-6);

/// r with (df - (f + t0) alpha) o r = dfhat - (fhat + t0) alphahat.
template <int M>
struct ROperator {
  using Matrix = Eigen::Matrix<double, M, M>;
  Matrix r = Matrix::Zero();
  Matrix induced = Matrix::Zero();   // (df, df)
  std::array<LieVector<M>, M> image{};  // dfhat(d_j) - (fhat + t0) alphahat(d_j)
  double relation_residual = 0.0;
  double symmetry_residual = 0.0;    // |(df,df) r - ((df,df) r)^T|_max
};

template <int M>
ROperator<M> r_operator(const LegendreFrame<M>& frame, const TransformResult<M>& res,
                        double singular_tol = kSingularTolerance) {
  using Matrix = typename ROperator<M>::Matrix;
  ROperator<M> op;
  const LieVector<M> e = values(frame.point_sphere());
  const LieVector<M> eh = values(res.f_hat) + t0<M>();
  const std::array<double, M> ah = alpha_hat(frame, res);
  std::array<LieVector<M>, M> basis;
  for (int k = 0; k < M; ++k) {
    basis[k] = partial_values(frame.f, k) - res.alpha[k].value * e;
    op.image[k] = partial_values(res.f_hat, k) - ah[k] * eh;
  }
  Matrix normal, rhs;
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < M; ++l) {
      normal(k, l) = lie_inner(basis[k], basis[l]);
      rhs(k, l) = lie_inner(basis[k], op.image[l]);
      const LieVector<M> dk = partial_values(frame.f, k), dl = partial_values(frame.f, l);
      op.induced(k, l) = lie_inner(dk, dl);
    }
  }
  const double scale = normal.cwiseAbs().maxCoeff();
  if (!(std::abs(normal.determinant()) >= singular_tol * std::pow(scale, M)) || scale == 0.0) {
    throw IllPosed("r-operator normal equations are singular");
  }
  op.r = normal.fullPivLu().solve(rhs);
  for (int j = 0; j < M; ++j) {
    LieVector<M> lhs;
    for (int k = 0; k < M; ++k) lhs += op.r(k, j) * basis[k];
    op.relation_residual = std::max(op.relation_residual, max_abs(lhs - op.image[j]));
  }
  const Matrix sym = op.induced * op.r;
  op.symmetry_residual = (sym - sym.transpose()).cwiseAbs().maxCoeff();
  return op;
}

template <int M>
double commutator_norm(const Eigen::Matrix<double, M, M>& a, const Eigen::Matrix<double, M, M>& b) {
  return (a * b - b * a).norm();
}

/// r-operators of (chart, tau) at every grid point.
std::vector<ROperator<2>> r_operator_field(const ChartSpec& chart, const TauSampler& tau,
                                           const Grid& grid, const Tolerances& tol = {});

struct BianchiReport {
  double commutator_norm = 0.0;  // max Frobenius norm of [r0, r1]
  double wedge_norm = 0.0;       // max |(image0 ^ image1)(d_u, d_v)|
  std::array<double, 2> where{};
  double max_relation = 0.0;
  double max_symmetry = 0.0;
};

BianchiReport bianchi_check(std::span<const ROperator<2>> r0, std::span<const ROperator<2>> r1,
                            const Grid& grid);

/// Two Ribaucour functions of one chart with their potentials on a grid.
struct DemoulinFamily {
  ChartSpec chart;
  Grid grid;
  Tolerances tol;
  std::vector<Jet<2>> tau0;
  std::vector<Jet<2>> tau1;
  SweepReport sweep0;
  SweepReport sweep1;
  Potential tilde0;
  Potential tilde1;
  std::vector<double> theta_samples;

  /// 2-jet of the potential: value from the grid, gradient -alpha, Hessian
  /// the symmetrized -d alpha partials.
  Jet<2> tilde_jet(int which, int i, int j) const;
};

/// Certifies both functions (NotRibaucour), checks that they are pointwise
/// distinct (NotPointwiseDistinct) and integrates their potentials.
DemoulinFamily make_demoulin_family(const ChartSpec& chart, const TauSampler& tau0,
                                    const TauSampler& tau1, const Grid& grid,
                                    const Tolerances& tol = {});

struct DemoulinMember {
  double theta = 0.0;
  GridField tau;                       // NaN where masked
  std::vector<unsigned char> mask;     // 1 where the denominator is below threshold
  double masked_fraction = 0.0;
  // filled by verify_member
  int nonregular = 0;
  double max_dalpha = 0.0;
  double max_alpha = 0.0;
  bool ribaucour = false;
};

/// cos/sin of theta with exact values at multiples of pi/2.
std::array<double, 2> exact_cos_sin(double theta);

/// tau_theta = (c e^{tilde1} tau0 + s e^{tilde0} tau1) / (c e^{tilde1} + s e^{tilde0})
/// with (c, s) = exact_cos_sin(theta). Points where |denominator| < eps,
/// eps = tol.mask * (e^{max tilde0} + e^{max tilde1}), are masked.
/// Throws FullyMasked when more than half of the grid is masked.
DemoulinMember demoulin_tau(const DemoulinFamily& family, double theta);

/// Same formula on jets; returns tau0 / tau1 verbatim at the endpoints.
Jet<2> member_jet(const DemoulinFamily& family, double theta, int i, int j);

/// Grid sampler for tau_theta (NaN jets at masked points).
TauSampler member_sampler(const DemoulinFamily& family, double theta);

/// Runs the closedness test on the unmasked regular points of a member.
void verify_member(const DemoulinFamily& family, DemoulinMember& member);

struct ParallelSections {
  GridField u0;
  GridField u1;
  double residual = 0.0;  // max |(d sigma_i, fhat_j + t0)|
};

/// sigma_i = u_i (xi - tau_i f - tau_i t0 + t1), u_i = e^{tilde_j} / (tau_i - tau_j).
/// include_potential_factor = false drops e^{tilde_j} (negative control).
ParallelSections parallel_sections(const DemoulinFamily& family, bool include_potential_factor = true);

struct DualFamilyOptions {
  double initial_offset = 1.0;  // tau0 - tauhat0 at the base point
  std::array<int, 2> base{0, 0};
};

struct DualFamilyResult {
  Grid grid;
  GridField gamma;                 // 2 components
  GridField tau_hat0;              // base row first, then columns
  GridField tau_hat0_column_first;
  GridField v;                     // v(base) = 1
  double consistency = 0.0;        // max |row-first - column-first|
  // max |d((tau0 - tauhat0) gamma)| at the nodes, from the integrated
  // tau0 - tauhat0, its differential and finite-difference partials of gamma
  double gamma_identity_residual = 0.0;
  double gamma_identity_circulation = 0.0;  // same quantity from trapezoid cell circulations, O(h^2)
};

/// Integrates d ln|tau0 - tauhat0| = (alpha_1 - alphahat_0) + d ln|tau1 - tau0|
/// + (tau0 - tauhat0) gamma with RK4 along grid lines, then
/// -d ln|v| = d ln|tau0 - tauhat0| + alphahat_0. gamma comes from
/// (dfhat0 - (fhat0 + t0) alphahat0, fhat1 + t0) = (tau1 - tau0)(a1 - 1) gamma.
/// The patch must be non-periodic. Throws BlowUp when |tau0 - tauhat0|
/// leaves [1e-8, 1e8] and PathDependence when the two integration orders
/// disagree by more than tol.dual_consistency.
DualFamilyResult dual_family_step(const ChartSpec& chart, const TauSampler& tau0,
                                  const TauSampler& tau1, const Grid& patch,
                                  const Tolerances& tol = {}, DualFamilyOptions opts = {});

}  // namespace ribau
