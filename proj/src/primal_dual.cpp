#include "gfrb/primal_dual.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <sstream>

namespace gfrb {

StepsizeCheck check_stepsizes(double tau, double sigma, double b, double lipschitz, double norm_k) {
  if (!(tau > 0.0) || !(sigma > 0.0)) throw ParameterError("check_stepsizes: tau, sigma must be > 0");
  if (!(lipschitz >= 0.0) || !(norm_k >= 0.0))
    throw ParameterError("check_stepsizes: L and ||K|| must be >= 0");
  const double used = 2.0 * tau * (1.0 + std::abs(b)) * lipschitz + tau * sigma * norm_k * norm_k;
  return {used < 1.0, 1.0 - used};
}

std::vector<RegionCell> admissible_region(double b, double lipschitz, double norm_k, int grid) {
  if (grid < 1) throw ParameterError("admissible_region: grid must be >= 1");
  std::vector<RegionCell> cells;
  cells.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  for (int i = 1; i <= grid; ++i) {
    const double tau = static_cast<double>(i) / grid;
    for (int j = 1; j <= grid; ++j) {
      const double sigma = static_cast<double>(j) / grid;
      const auto check = check_stepsizes(tau, sigma, b, lipschitz, norm_k);
      cells.push_back({tau, sigma, check.admissible, check.slack});
    }
  }
  return cells;
}

double admissible_fraction(const std::vector<RegionCell>& cells) {
  if (cells.empty()) return 0.0;
  std::size_t inside = 0;
  for (const auto& cell : cells) inside += cell.admissible ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(cells.size());
}

EPDTRConfig EPDTRConfig::balanced(double b, double lipschitz, double norm_k, double budget) {
  if (!(budget > 0.0 && budget < 1.0)) throw ParameterError("EPDTRConfig::balanced: budget in (0, 1)");
  EPDTRConfig cfg;
  cfg.b = b;
  const double primal_rate = 2.0 * (1.0 + std::abs(b)) * lipschitz;
  const double k2 = norm_k * norm_k;
  if (primal_rate > 0.0 && k2 > 0.0) {
    cfg.tau = 0.5 * budget / primal_rate;
    cfg.sigma = 0.5 * budget / (cfg.tau * k2);
  } else if (primal_rate > 0.0) {
    cfg.tau = budget / primal_rate;
    cfg.sigma = 1.0;
  } else if (k2 > 0.0) {
    cfg.tau = std::sqrt(budget / k2);
    cfg.sigma = cfg.tau;
  } else {
    cfg.tau = 1.0;
    cfg.sigma = 1.0;
  }
  return cfg;
}

Vector resolvent_of_inverse(const ResolventOperator& resolvent_c, double sigma, const Vector& y) {
  if (!(sigma > 0.0)) throw ParameterError("resolvent_of_inverse: sigma must be positive");
  return y - sigma * resolvent_c(Vector(y / sigma), 1.0 / sigma);
}

ResolventOperator inverse_resolvent(ResolventOperator resolvent_c) {
  return {[jc = std::move(resolvent_c)](const Vector& y, double sigma) {
    return resolvent_of_inverse(jc, sigma, y);
  }};
}

PrimalDualState make_primal_dual_state(const PrimalDualProblem& problem, const Vector& x0,
                                       const Vector& x_minus1, const Vector& x_minus2,
                                       const Vector& y0) {
  if (x0.size() != problem.k.in_dim || y0.size() != problem.k.out_dim)
    throw DimensionError("make_primal_dual_state: x0/y0 do not match K");
  if (x_minus1.size() != x0.size() || x_minus2.size() != x0.size())
    throw DimensionError("make_primal_dual_state: history points have wrong dimension");
  PrimalDualState s;
  s.x = x0;
  s.x_prev = x_minus1;
  s.x_prev2 = x_minus2;
  s.y = y0;
  s.bx = problem.forward(x0);
  s.bx_prev = (x_minus1 == x0) ? s.bx : Vector(problem.forward(x_minus1));
  s.bx_prev2 = (x_minus2 == x_minus1) ? s.bx_prev
               : (x_minus2 == x0)     ? s.bx
                                      : Vector(problem.forward(x_minus2));
  s.kx = problem.k.apply(x0);
  return s;
}

PrimalDualState make_primal_dual_state(const PrimalDualProblem& problem, const Vector& x0,
                                       const Vector& y0) {
  return make_primal_dual_state(problem, x0, x0, x0, y0);
}

PrimalDualState epdtr_step(const PrimalDualState& state, const EPDTRConfig& cfg,
                           const PrimalDualProblem& problem) {
  const double tau = cfg.tau;
  const double sigma = cfg.sigma;
  const double b = cfg.b;

  Vector v = state.x - tau * problem.k.apply_adjoint(state.y) - (b + 2.0) * tau * state.bx +
             (2.0 * b + 1.0) * tau * state.bx_prev - b * tau * state.bx_prev2;
  PrimalDualState next;
  next.x = problem.resolvent_a(v, tau);
  next.kx = problem.k.apply(next.x);
  next.y = problem.resolvent_c_inverse(Vector(state.y + 2.0 * sigma * next.kx - sigma * state.kx),
                                       sigma);
  next.x_prev = state.x;
  next.x_prev2 = state.x_prev;
  next.bx = problem.forward(next.x);
  next.bx_prev = state.bx;
  next.bx_prev2 = state.bx_prev;
  next.k = state.k + 1;
  return next;
}

PrimalDualResiduals primal_dual_residuals(const PrimalDualProblem& problem, const EPDTRConfig& cfg,
                                          const Vector& x, const Vector& y) {
  PrimalDualResiduals r;
  const Vector primal_arg = x - cfg.tau * (problem.forward(x) + problem.k.apply_adjoint(y));
  r.primal = (x - problem.resolvent_a(primal_arg, cfg.tau)).norm();
  const Vector dual_arg = y + cfg.sigma * problem.k.apply(x);
  r.dual = (y - problem.resolvent_c_inverse(dual_arg, cfg.sigma)).norm();
  return r;
}

PrimalDualResult epdtr_solve(const PrimalDualProblem& problem, const EPDTRConfig& cfg,
                             const Vector& x0, const Vector& y0, const StopRule& stop) {
  stop.validate();
  if (!(cfg.tau > 0.0) || !(cfg.sigma > 0.0))
    throw ParameterError("epdtr_solve: tau and sigma must be positive");

  PrimalDualResult result;
  const double lipschitz = problem.forward.lipschitz_hint.value_or(0.0);
  // Estimated norms are inflated by 1% before the admissibility check.
  const double norm_k = problem.k.norm_hint ? *problem.k.norm_hint : 1.01 * power_norm(problem.k);
  if (problem.forward.lipschitz_hint) {
    const auto check = check_stepsizes(cfg.tau, cfg.sigma, cfg.b, lipschitz, norm_k);
    if (!check.admissible) {
      std::ostringstream msg;
      msg << "epdtr: (tau, sigma) = (" << cfg.tau << ", " << cfg.sigma
          << ") violates 2 tau (1+|b|) L + tau sigma ||K||^2 < 1 (slack " << check.slack << ")";
      result.warnings.push_back(msg.str());
    }
  }

  const auto start = std::chrono::steady_clock::now();
  PrimalDualState state = make_primal_dual_state(problem, x0, y0);
  for (int k = 0;; ++k) {
    PrimalDualState next = epdtr_step(state, cfg, problem);
    const double err =
        std::sqrt((next.x - state.x).squaredNorm() + (next.y - state.y).squaredNorm());
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.rows.push_back({k, err, cfg.tau, elapsed});
    if (!std::isfinite(err) || err > detail::kDivergenceThreshold || !next.x.allFinite() ||
        !next.y.allFinite()) {
      std::ostringstream msg;
      msg << "epdtr: diverged at iteration " << k << " (err=" << err << ")";
      throw DivergenceError(msg.str(), result.trace);
    }
    state = std::move(next);
    if (err <= stop.tol) {
      result.converged = true;
      break;
    }
    if (k + 1 >= stop.max_iter) break;
  }
  result.x = state.x;
  result.y = state.y;
  result.iterations = static_cast<int>(result.trace.rows.size());
  result.residuals = primal_dual_residuals(problem, cfg, result.x, result.y);
  return result;
}

std::vector<Vector> gfrb_in_metric(const LinearPrimalDualInstance& instance, const EPDTRConfig& cfg,
                                   const Vector& z0, const Vector& z_minus1, const Vector& z_minus2,
                                   int steps) {
  const Eigen::Index n = instance.a.rows();
  const Eigen::Index m = instance.c_inv.rows();
  if (instance.k.rows() != m || instance.k.cols() != n || instance.b.rows() != n)
    throw DimensionError("gfrb_in_metric: block dimensions disagree");
  const Eigen::Index dim = n + m;
  if (z0.size() != dim || z_minus1.size() != dim || z_minus2.size() != dim)
    throw DimensionError("gfrb_in_metric: z has wrong dimension");

  Matrix metric(dim, dim);
  metric << Matrix::Identity(n, n) / cfg.tau, -instance.k.transpose(), -instance.k,
      Matrix::Identity(m, m) / cfg.sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> spd(metric, Eigen::EigenvaluesOnly);
  if (spd.info() != Eigen::Success || !(spd.eigenvalues().minCoeff() > 0.0))
    throw DomainError("gfrb_in_metric: metric M is not positive definite (need tau sigma ||K||^2 < 1)");

  Matrix g(dim, dim);
  g << instance.a, instance.k.transpose(), -instance.k, instance.c_inv;
  Matrix f = Matrix::Zero(dim, dim);
  f.topLeftCorner(n, n) = instance.b;

  const Eigen::PartialPivLU<Matrix> lhs(metric + g);
  const double b = cfg.b;
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(steps));
  Vector z = z0, z1 = z_minus1, z2 = z_minus2;
  for (int k = 0; k < steps; ++k) {
    const Vector rhs = metric * z - (b + 2.0) * (f * z) + (2.0 * b + 1.0) * (f * z1) - b * (f * z2);
    Vector next = lhs.solve(rhs);
    z2 = std::move(z1);
    z1 = std::move(z);
    z = next;
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace gfrb
