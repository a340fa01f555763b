#pragma once

// Extended primal-dual twice-reflected iteration for
//
//   0 in (A + B + K^* C K)(x)
//
// with A, C maximally monotone, B monotone and L-Lipschitz, K linear:
//
//   x+ = J_{tau A}(x - tau K^* y - (b+2) tau Bx + (2b+1) tau Bx1 - b tau Bx2)
//   y+ = J_{sigma C^{-1}}(y + 2 sigma K x+ - sigma K x)
//
// b = 0 gives the two-term PDTR recursion. Convergence needs
// 2 tau (1+|b|) L + tau sigma ||K||^2 < 1.

#include <vector>

#include "gfrb/operators.hpp"
#include "gfrb/splitting.hpp"

namespace gfrb {

struct StepsizeCheck {
  bool admissible = false;
  /// 1 - (2 tau (1+|b|) L + tau sigma ||K||^2).
  double slack = 0.0;
};

StepsizeCheck check_stepsizes(double tau, double sigma, double b, double lipschitz, double norm_k);

struct RegionCell {
  double tau = 0.0;
  double sigma = 0.0;
  bool admissible = false;
  double slack = 0.0;
};

/// grid x grid cells over (0, 1]^2 at tau_i = i/grid, sigma_j = j/grid.
std::vector<RegionCell> admissible_region(double b, double lipschitz, double norm_k, int grid);

/// Fraction of admissible cells.
double admissible_fraction(const std::vector<RegionCell>& cells);

struct EPDTRConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double b = 0.0;

  /// Spends `budget` of the admissibility bound, half on the primal term
  /// 2 tau (1+|b|) L and half on tau sigma ||K||^2.
  static EPDTRConfig balanced(double b, double lipschitz, double norm_k, double budget = 0.95);
};

/// y -> J_{sigma C^{-1}}(y) = y - sigma J_{C / sigma}(y / sigma), given J_C.
Vector resolvent_of_inverse(const ResolventOperator& resolvent_c, double sigma, const Vector& y);

/// ResolventOperator for C^{-1} built from one for C.
ResolventOperator inverse_resolvent(ResolventOperator resolvent_c);

struct PrimalDualProblem {
  ResolventOperator resolvent_a;
  ForwardOperator forward;
  LinearMap k;
  /// Resolvent of C^{-1}; see inverse_resolvent().
  ResolventOperator resolvent_c_inverse;
};

struct PrimalDualState {
  Vector x;
  Vector x_prev;
  Vector x_prev2;
  Vector y;
  Vector bx;
  Vector bx_prev;
  Vector bx_prev2;
  /// K x, reused as "K x_k" by the following y-update.
  Vector kx;
  int k = 0;
};

/// Seeds the state from three primal points and y0. Evaluates B once per
/// distinct primal point and K once.
PrimalDualState make_primal_dual_state(const PrimalDualProblem& problem, const Vector& x0,
                                       const Vector& x_minus1, const Vector& x_minus2,
                                       const Vector& y0);
PrimalDualState make_primal_dual_state(const PrimalDualProblem& problem, const Vector& x0,
                                       const Vector& y0);

/// One iteration. Costs one B evaluation, one K apply, one K^* apply,
/// one J_{tau A} and one J_{sigma C^{-1}} call.
PrimalDualState epdtr_step(const PrimalDualState& state, const EPDTRConfig& cfg,
                           const PrimalDualProblem& problem);

struct PrimalDualResiduals {
  /// ||x - J_{tau A}(x - tau (Bx + K^* y))||
  double primal = 0.0;
  /// ||y - J_{sigma C^{-1}}(y + sigma K x)||
  double dual = 0.0;
};

PrimalDualResiduals primal_dual_residuals(const PrimalDualProblem& problem, const EPDTRConfig& cfg,
                                          const Vector& x, const Vector& y);

struct PrimalDualResult {
  Vector x;
  Vector y;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;
  PrimalDualResiduals residuals;
  std::vector<std::string> warnings;
};

/// Runs epdtr_step until ||z_{k+1} - z_k|| <= tol, z = (x, y).
/// `lipschitz` and `norm_k` feed the admissibility warning when known.
PrimalDualResult epdtr_solve(const PrimalDualProblem& problem, const EPDTRConfig& cfg,
                             const Vector& x0, const Vector& y0, const StopRule& stop);

/// Linear instance for the metric-space oracle: A, B, C^{-1} are matrices.
struct LinearPrimalDualInstance {
  Matrix a;       // n x n, monotone
  Matrix b;       // n x n, monotone
  Matrix k;       // m x n
  Matrix c_inv;   // m x m, monotone
};

/// The product-space GFRB trajectory
///   z+ = (M + G)^{-1} (M z - (b+2) F z + (2b+1) F z1 - b F z2)
/// with M = [[I/tau, -K^T], [-K, I/sigma]], G = [[A, K^T], [-K, C^{-1}]],
/// F = diag(B, 0), computed by dense linear solves. Returns z_1 .. z_steps.
/// Throws DomainError unless M is positive definite.
std::vector<Vector> gfrb_in_metric(const LinearPrimalDualInstance& instance, const EPDTRConfig& cfg,
                                   const Vector& z0, const Vector& z_minus1, const Vector& z_minus2,
                                   int steps);

}  // namespace gfrb
