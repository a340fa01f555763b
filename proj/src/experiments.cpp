#include "gfrb/experiments.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "gfrb/rng.hpp"

namespace gfrb {

namespace {

// Substream ids. Each generated array owns one.
enum Stream : std::uint64_t {
  kStreamFirst = 0,
  kStreamSecond = 1,
  kStreamThird = 2,
  kStreamFourth = 3,
};

void require_positive_dim(Eigen::Index m, const char* what) {
  if (m < 1) throw ParameterError(std::string(what) + ": dimension must be >= 1");
}

}  // namespace

Vector example1_solution(const Vector& b) { return -0.5 * soft_threshold<double>(b, 1.0); }

Example1 gen_example1(Eigen::Index m, std::uint64_t seed) {
  require_positive_dim(m, "gen_example1");
  Example1 ex;
  ex.b = Rng(seed, kStreamFirst).normal_vector(m);
  auto shift = std::make_shared<const Vector>(ex.b);
  ex.forward = {[shift](const Vector& x) -> Vector { return 2.0 * x + *shift; }, 2.0};
  ex.resolvent = l1_resolvent();
  ex.x_star = example1_solution(ex.b);
  return ex;
}

Example2 gen_example2(Eigen::Index m, std::uint64_t seed) {
  require_positive_dim(m, "gen_example2");
  Example2 ex;
  const Matrix r = Rng(seed, kStreamFirst).normal_matrix(m, m);
  ex.g = Rng(seed, kStreamSecond).normal_matrix(m, m);
  const Matrix r_bar = Rng(seed, kStreamThird).normal_matrix(m, m);
  ex.b = Rng(seed, kStreamFourth).normal_vector(m);

  ex.e = 0.5 * (r + r.transpose());
  ex.s = 0.5 * (r_bar - r_bar.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> e_eigs(ex.e, Eigen::EigenvaluesOnly);
  ex.beta = e_eigs.eigenvalues().cwiseAbs().maxCoeff();

  const Matrix sym_g = 0.5 * (ex.g + ex.g.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> g_eigs(sym_g, Eigen::EigenvaluesOnly);
  // sym(M) = sym(G) + tau I >= 0.1 I.
  ex.tau_shift = std::max(0.0, -g_eigs.eigenvalues().minCoeff()) + 0.1;

  ex.m = ex.g.transpose() + ex.s + ex.tau_shift * Matrix::Identity(m, m);
  ex.forward = make_affine_forward(ex.m, ex.b);
  ex.lipschitz = *ex.forward.lipschitz_hint;
  ex.resolvent = SymmetricAffineResolvent::make(ex.e, ex.beta);
  return ex;
}

LassoProblem gen_lasso(Eigen::Index m, Eigen::Index n, Eigen::Index k, double noise_sigma,
                       double reg_lambda, std::uint64_t seed) {
  require_positive_dim(m, "gen_lasso");
  require_positive_dim(n, "gen_lasso");
  if (k < 1 || k > n) throw ParameterError("gen_lasso: need 1 <= k <= n");
  if (!(noise_sigma >= 0.0)) throw ParameterError("gen_lasso: noise_sigma must be >= 0");
  if (!(reg_lambda > 0.0)) throw ParameterError("gen_lasso: reg_lambda must be positive");

  LassoProblem p;
  p.reg_lambda = reg_lambda;
  p.noise_sigma = noise_sigma;
  p.design = Rng(seed, kStreamFirst).normal_matrix(m, n, 1.0 / std::sqrt(static_cast<double>(m)));
  p.x_true = Vector::Zero(n);
  const auto support = Rng(seed, kStreamSecond).sample_without_replacement(n, k);
  Rng values(seed, kStreamThird);
  for (Eigen::Index idx : support) p.x_true[idx] = values.normal();
  p.y = p.design * p.x_true + Rng(seed, kStreamFourth).normal_vector(m, noise_sigma);
  p.forward = make_lasso_forward(p.design, p.y);
  p.resolvent = l1_resolvent(reg_lambda);
  return p;
}

Vector ista_reference(const Matrix& design, const Vector& y, double reg_lambda, int iterations) {
  const double norm = spectral_norm(design);
  if (norm == 0.0) return Vector::Zero(design.cols());
  const double step = 1.0 / (norm * norm);
  Vector x = Vector::Zero(design.cols());
  for (int it = 0; it < iterations; ++it) {
    const Vector grad = design.transpose() * (design * x - y);
    x = soft_threshold<double>(x - step * grad, step * reg_lambda);
  }
  return x;
}

double snr(const Vector& x_true, const Vector& x) {
  const double signal = x_true.norm();
  if (signal == 0.0) throw DomainError("snr: x_true must be nonzero");
  const double noise = (x - x_true).norm();
  if (noise == 0.0) return std::numeric_limits<double>::max();
  return 20.0 * std::log10(signal / noise);
}

CompositeInstance gen_composite(Eigen::Index n, std::uint64_t seed, double alpha, double mu) {
  if (n < 2) throw ParameterError("gen_composite: n must be >= 2");
  if (!(alpha > 0.0) || !(mu > 0.0)) throw ParameterError("gen_composite: alpha, mu must be positive");
  CompositeInstance inst;
  inst.alpha = alpha;
  inst.mu = mu;

  // Piecewise-constant signal with a few jumps, zero on roughly half the domain.
  Rng levels(seed, kStreamFirst);
  inst.clean = Vector::Zero(n);
  const Eigen::Index pieces = 6;
  for (Eigen::Index p = 0; p < pieces; ++p) {
    const double level = (p % 2 == 0) ? 0.0 : 2.0 * levels.normal();
    for (Eigen::Index i = p * n / pieces; i < (p + 1) * n / pieces; ++i) inst.clean[i] = level;
  }
  inst.data = inst.clean + Rng(seed, kStreamSecond).normal_vector(n, 0.3);

  Matrix diff = Matrix::Zero(n - 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    diff(i, i) = -1.0;
    diff(i, i + 1) = 1.0;
  }
  inst.norm_k = spectral_norm(diff);

  auto data = std::make_shared<const Vector>(inst.data);
  inst.problem.resolvent_a = l1_resolvent(alpha);
  inst.problem.forward = {[data](const Vector& x) -> Vector { return x - *data; }, 1.0};
  inst.problem.k = matrix_map(std::move(diff), inst.norm_k);
  inst.problem.resolvent_c_inverse = inverse_resolvent(l1_resolvent(mu));
  return inst;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::example1:
      return "example1";
    case ProblemKind::example2:
      return "example2";
    case ProblemKind::lasso:
      return "lasso";
  }
  return "unknown";
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::gfrb_adaptive:
      return "gfrb_adaptive";
    case SolverKind::gfrb_fixed:
      return "gfrb_fixed";
    case SolverKind::frb:
      return "frb";
    case SolverKind::fbf:
      return "fbf";
    case SolverKind::rfb:
      return "rfb";
    case SolverKind::fb:
      return "fb";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "example1") return ProblemKind::example1;
  if (name == "example2") return ProblemKind::example2;
  if (name == "lasso") return ProblemKind::lasso;
  throw ParameterError("unknown problem '" + name + "' (expected example1, example2 or lasso)");
}

SolverKind solver_kind_from_string(const std::string& name) {
  for (SolverKind kind : {SolverKind::gfrb_adaptive, SolverKind::gfrb_fixed, SolverKind::frb,
                          SolverKind::fbf, SolverKind::rfb, SolverKind::fb}) {
    if (to_string(kind) == name) return kind;
  }
  throw ParameterError("unknown solver '" + name + "'");
}

GeneratedProblem generate(const ProblemSpec& spec, std::uint64_t seed) {
  GeneratedProblem out;
  out.kind = spec.kind;
  switch (spec.kind) {
    case ProblemKind::example1: {
      auto ex = gen_example1(spec.m, seed);
      out.dim = spec.m;
      out.resolvent = std::move(ex.resolvent);
      out.forward = std::move(ex.forward);
      out.x_star = std::move(ex.x_star);
      break;
    }
    case ProblemKind::example2: {
      auto ex = gen_example2(spec.m, seed);
      out.dim = spec.m;
      out.resolvent = std::move(ex.resolvent);
      out.forward = std::move(ex.forward);
      break;
    }
    case ProblemKind::lasso: {
      auto p = gen_lasso(spec.m, spec.n, spec.k, spec.noise_sigma, spec.reg_lambda, seed);
      out.dim = spec.n;
      out.resolvent = std::move(p.resolvent);
      out.forward = std::move(p.forward);
      out.x_true = std::move(p.x_true);
      break;
    }
  }
  return out;
}

double default_fixed_lambda(SolverKind kind, double delta, double lipschitz) {
  if (!(lipschitz > 0.0)) throw ParameterError("default_fixed_lambda: Lipschitz constant unknown");
  switch (kind) {
    case SolverKind::gfrb_fixed:
      return 0.9 / (2.0 * lipschitz * (1.0 + std::abs(delta)));
    case SolverKind::frb:
      return 0.9 / (2.0 * lipschitz);
    case SolverKind::fbf:
    case SolverKind::fb:
      return 0.9 / lipschitz;
    case SolverKind::rfb:
      return 0.9 * (std::sqrt(2.0) - 1.0) / lipschitz;
    case SolverKind::gfrb_adaptive:
      break;
  }
  throw ParameterError("default_fixed_lambda: adaptive solver has no fixed step");
}

RunResult run_solver(const GeneratedProblem& problem, const ExperimentConfig& cfg,
                     const SolverSpec& solver, const IterationObserver<double>& observer) {
  const Vector x0 = cfg.x0 == InitialPoint::ones ? Vector::Ones(problem.dim)
                                                 : Vector::Zero(problem.dim);
  const auto lambda = [&] {
    if (solver.lambda) return *solver.lambda;
    return default_fixed_lambda(solver.kind, solver.delta,
                                problem.forward.lipschitz_hint.value_or(0.0));
  };

  SolveResult<double> solved;
  const auto start = std::chrono::steady_clock::now();
  switch (solver.kind) {
    case SolverKind::gfrb_adaptive:
      solved = gfrb_adaptive(problem.resolvent, problem.forward, x0, x0, solver.delta,
                             solver.stepsize, cfg.stop, observer);
      break;
    case SolverKind::gfrb_fixed:
      solved = gfrb_fixed<double>(problem.resolvent, problem.forward, x0, x0, x0, lambda(),
                                  solver.delta, cfg.stop, observer);
      break;
    case SolverKind::frb:
      solved = frb<double>(problem.resolvent, problem.forward, x0, x0, lambda(), cfg.stop, observer);
      break;
    case SolverKind::fbf:
      solved = fbf<double>(problem.resolvent, problem.forward, x0, lambda(), cfg.stop, observer);
      break;
    case SolverKind::rfb:
      solved = rfb<double>(problem.resolvent, problem.forward, x0, x0, lambda(), cfg.stop, observer);
      break;
    case SolverKind::fb:
      solved = fb<double>(problem.resolvent, problem.forward, x0, lambda(), cfg.stop, observer);
      break;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunResult result;
  result.problem = to_string(cfg.problem.kind);
  result.solver = to_string(solver.kind);
  result.m = cfg.problem.m;
  result.n = cfg.problem.kind == ProblemKind::lasso ? cfg.problem.n : cfg.problem.m;
  result.seed = cfg.seed;
  result.iterations = solved.iterations;
  result.elapsed_seconds = elapsed;
  result.final_err = solved.trace.empty() ? 0.0 : solved.trace.back().err;
  result.converged = solved.converged;
  result.trace = std::move(solved.trace);
  result.x = std::move(solved.x);
  result.warnings = std::move(solved.warnings);
  return result;
}

RunResult run_benchmark(const ExperimentConfig& cfg, std::size_t index) {
  if (index >= cfg.solvers.size()) throw ParameterError("run_benchmark: solver index out of range");
  const auto problem = generate(cfg.problem, cfg.seed);
  return run_solver(problem, cfg, cfg.solvers[index]);
}

std::vector<RunResult> run_suite(const ExperimentConfig& cfg) {
  const auto problem = generate(cfg.problem, cfg.seed);
  std::vector<RunResult> results;
  results.reserve(cfg.solvers.size());
  for (const auto& solver : cfg.solvers) results.push_back(run_solver(problem, cfg, solver));
  return results;
}

void write_summary_csv(std::ostream& out, const std::vector<RunResult>& results,
                       bool include_timing) {
  const auto old_precision = out.precision(17);
  out << "problem,solver,m,n,seed,iters,final_err,elapsed_s\n";
  for (const auto& r : results) {
    out << r.problem << ',' << r.solver << ',' << r.m << ',' << r.n << ',' << r.seed << ','
        << r.iterations << ',' << r.final_err << ',' << (include_timing ? r.elapsed_seconds : 0.0)
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace gfrb
