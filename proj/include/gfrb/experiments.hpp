#pragma once

// Seeded problem generators, metrics and the benchmark driver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfrb/operators.hpp"
#include "gfrb/primal_dual.hpp"
#include "gfrb/splitting.hpp"
#include "gfrb/stepsize.hpp"

namespace gfrb {

/// min ||x||^2 + b^T x + ||x||_1 posed as A = d||.||_1, B(x) = 2x + b.
struct Example1 {
  Vector b;
  ResolventOperator resolvent;
  ForwardOperator forward;  // L = 2
  Vector x_star;            // -soft(b, 1) / 2
};

/// x*_i = -soft(b_i, 1) / 2, the componentwise optimality condition of Example1.
Vector example1_solution(const Vector& b);

Example1 gen_example1(Eigen::Index m, std::uint64_t seed);

/// A(x) = (E + beta I) x, B(x) = M x + b with M = G^T + S + tau I.
struct Example2 {
  Matrix e;
  Matrix s;
  Matrix g;
  Matrix m;
  Vector b;
  double beta = 0.0;
  double tau_shift = 0.0;
  double lipschitz = 0.0;
  ResolventOperator resolvent;
  ForwardOperator forward;
};

Example2 gen_example2(Eigen::Index m, std::uint64_t seed);

/// 1/2 ||A x - y||^2 + reg ||x||_1 with A_ij ~ N(0, 1/m) and a k-sparse truth.
struct LassoProblem {
  Matrix design;
  Vector y;
  Vector x_true;
  double reg_lambda = 0.0;
  double noise_sigma = 0.0;
  ResolventOperator resolvent;
  ForwardOperator forward;  // L = ||A||_2^2
};

LassoProblem gen_lasso(Eigen::Index m, Eigen::Index n, Eigen::Index k, double noise_sigma,
                       double reg_lambda, std::uint64_t seed);

/// Proximal gradient (ISTA) from x = 0 with step 1/||A||_2^2.
Vector ista_reference(const Matrix& design, const Vector& y, double reg_lambda, int iterations);

/// 20 log10(||x_true|| / ||x - x_true||) in dB. Returns
/// std::numeric_limits<double>::max() when x == x_true; DomainError when
/// x_true == 0.
double snr(const Vector& x_true, const Vector& x);

/// Sparse piecewise-constant denoising
///   min 1/2 ||x - d||^2 + alpha ||x||_1 + mu ||D x||_1
/// with D the (n-1) x n forward difference: A = alpha d||.||_1,
/// B(x) = x - d (L = 1), K = D (||D|| <= 2), C = mu d||.||_1.
struct CompositeInstance {
  Vector data;
  Vector clean;
  double alpha = 0.0;
  double mu = 0.0;
  double lipschitz = 1.0;
  double norm_k = 0.0;
  PrimalDualProblem problem;
};

CompositeInstance gen_composite(Eigen::Index n, std::uint64_t seed, double alpha = 0.05,
                                double mu = 0.5);

enum class ProblemKind { example1, example2, lasso };
enum class SolverKind { gfrb_adaptive, gfrb_fixed, frb, fbf, rfb, fb };

std::string to_string(ProblemKind kind);
std::string to_string(SolverKind kind);
ProblemKind problem_kind_from_string(const std::string& name);
SolverKind solver_kind_from_string(const std::string& name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::example1;
  Eigen::Index m = 200;
  Eigen::Index n = 1024;  // lasso only
  Eigen::Index k = 20;    // lasso only
  double noise_sigma = 0.01;
  double reg_lambda = 0.01;
};

struct SolverSpec {
  SolverKind kind = SolverKind::gfrb_adaptive;
  double delta = 0.1;
  /// Fixed-step solvers: defaults to 0.9 times the method's sufficient bound.
  std::optional<double> lambda;
  /// gfrb_adaptive only.
  StepSizeParams stepsize = StepSizeParams::defaults_for(0.1);
};

enum class InitialPoint { ones, zeros };

struct ExperimentConfig {
  ProblemSpec problem;
  std::uint64_t seed = 10;
  std::vector<SolverSpec> solvers{SolverSpec{}};
  StopRule stop{1e-6, 5000};
  InitialPoint x0 = InitialPoint::ones;
};

/// A generated instance in solver-ready form.
struct GeneratedProblem {
  ProblemKind kind = ProblemKind::example1;
  Eigen::Index dim = 0;
  ResolventOperator resolvent;
  ForwardOperator forward;
  std::optional<Vector> x_star;  // example1
  std::optional<Vector> x_true;  // lasso
};

GeneratedProblem generate(const ProblemSpec& spec, std::uint64_t seed);

/// Step used by a fixed-step solver when none is configured.
double default_fixed_lambda(SolverKind kind, double delta, double lipschitz);

struct RunResult {
  std::string problem;
  std::string solver;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double elapsed_seconds = 0.0;
  double final_err = 0.0;
  bool converged = false;
  IterationTrace trace;
  Vector x;
  std::vector<std::string> warnings;
};

RunResult run_solver(const GeneratedProblem& problem, const ExperimentConfig& cfg,
                     const SolverSpec& solver, const IterationObserver<double>& observer = {});

/// Generates the problem once and runs solvers[index].
RunResult run_benchmark(const ExperimentConfig& cfg, std::size_t index = 0);

/// Runs every configured solver on one shared problem instance.
std::vector<RunResult> run_suite(const ExperimentConfig& cfg);

/// `problem,solver,m,n,seed,iters,final_err,elapsed_s`
void write_summary_csv(std::ostream& out, const std::vector<RunResult>& results,
                       bool include_timing = true);

}  // namespace gfrb
