#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

#include "gfrb/experiments.hpp"

using namespace gfrb;

TEST(Example1, KktOracle) {
  Vector b(3);
  b << 3.0, 0.5, -3.0;
  const Vector x = example1_solution(b);
  EXPECT_DOUBLE_EQ(x[0], -1.0);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
  EXPECT_DOUBLE_EQ(x[2], 1.0);
}

TEST(Example1, OracleSatisfiesInclusion) {
  const auto ex = gen_example1(50, 10);
  // 0 in 2x + b + d|x|: the fixed point of x = J(x - l B x) for any l > 0.
  const Vector again = ex.resolvent(Vector(ex.x_star - 0.3 * ex.forward(ex.x_star)), 0.3);
  EXPECT_LT((again - ex.x_star).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(*ex.forward.lipschitz_hint, 2.0);
  EXPECT_THROW(gen_example1(0, 1), ParameterError);
}

TEST(Example2, Construction) {
  const auto ex = gen_example2(40, 10);
  EXPECT_LT((ex.e - ex.e.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((ex.s + ex.s.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  const Matrix sym = 0.5 * (ex.m + ex.m.transpose());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
  EXPECT_GE(min_eig, -1e-10);
  EXPECT_NEAR(min_eig, 0.1, 1e-8);
  const Vector eigs = Eigen::SelfAdjointEigenSolver<Matrix>(ex.e).eigenvalues();
  EXPECT_DOUBLE_EQ(ex.beta, eigs.cwiseAbs().maxCoeff());
  // I + l A has eigenvalues 1 + l (beta + eig_i) >= 1.
  EXPECT_GE((eigs.array() + ex.beta).minCoeff(), -1e-12);
}

TEST(Example2, SeedDeterminism) {
  const auto a = gen_example2(20, 10);
  const auto b = gen_example2(20, 10);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.b, b.b);
  EXPECT_NE(a.m, gen_example2(20, 11).m);
}

TEST(Lasso, Construction) {
  const auto p = gen_lasso(64, 128, 7, 0.01, 0.01, 3);
  EXPECT_EQ((p.x_true.array() != 0.0).count(), 7);
  EXPECT_EQ(p.design.rows(), 64);
  EXPECT_EQ(p.design.cols(), 128);
  const double var = p.design.array().square().mean();
  EXPECT_NEAR(var, 1.0 / 64.0, 0.1 / 64.0);
  EXPECT_THROW(gen_lasso(64, 128, 129, 0.01, 0.01, 3), ParameterError);
  EXPECT_THROW(gen_lasso(64, 128, 0, 0.01, 0.01, 3), ParameterError);
  EXPECT_THROW(gen_lasso(64, 128, 5, 0.01, 0.0, 3), ParameterError);
}

TEST(Lasso, NoiselessZeroData) {
  auto p = gen_lasso(16, 32, 3, 0.0, 0.01, 4);
  p.x_true.setZero();
  p.y = p.design * p.x_true;
  EXPECT_EQ(p.y, Vector::Zero(16));
  EXPECT_EQ(ista_reference(p.design, p.y, 0.01, 100), Vector::Zero(32));
}

TEST(Lasso, SupportRecovery) {
  const auto p = gen_lasso(256, 1024, 20, 0.01, 0.01, 10);
  const Vector x = ista_reference(p.design, p.y, p.reg_lambda, 3000);
  const double threshold = 5.0 * p.noise_sigma * spectral_norm(p.design);
  for (Eigen::Index i = 0; i < p.x_true.size(); ++i) {
    if (std::abs(p.x_true[i]) > threshold) {
      EXPECT_EQ(std::signbit(x[i]), std::signbit(p.x_true[i])) << i;
    }
  }
}

TEST(Snr, Examples) {
  Vector truth(2);
  truth << 0.6, 0.8;
  EXPECT_NEAR(snr(truth, 0.5 * truth), 20.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(snr(truth, Vector::Zero(2)), 0.0, 1e-12);
  EXPECT_EQ(snr(truth, truth), std::numeric_limits<double>::max());
  EXPECT_THROW(snr(Vector::Zero(2), truth), DomainError);
}

TEST(Names, RoundTrip) {
  for (auto k : {ProblemKind::example1, ProblemKind::example2, ProblemKind::lasso})
    EXPECT_EQ(problem_kind_from_string(to_string(k)), k);
  for (auto k : {SolverKind::gfrb_adaptive, SolverKind::gfrb_fixed, SolverKind::frb, SolverKind::fbf,
                 SolverKind::rfb, SolverKind::fb})
    EXPECT_EQ(solver_kind_from_string(to_string(k)), k);
  EXPECT_THROW(problem_kind_from_string("nope"), ParameterError);
}

TEST(Benchmark, Example2AllSolversConverge) {
  ExperimentConfig cfg;
  cfg.problem.kind = ProblemKind::example2;
  cfg.problem.m = 200;
  cfg.seed = 10;
  cfg.stop = {1e-6, 20000};
  cfg.solvers = {{SolverKind::gfrb_adaptive, 0.1, std::nullopt, StepSizeParams::defaults_for(0.1)},
                 {SolverKind::gfrb_fixed, 0.1, std::nullopt, {}},
                 {SolverKind::frb, 0.0, std::nullopt, {}},
                 {SolverKind::fbf, 0.0, std::nullopt, {}},
                 {SolverKind::rfb, 0.0, std::nullopt, {}}};
  for (const auto& r : run_suite(cfg)) {
    EXPECT_TRUE(r.converged) << r.solver;
    EXPECT_LE(r.iterations, cfg.stop.max_iter);
    EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations));
  }
}

TEST(Benchmark, DeterministicApartFromTiming) {
  ExperimentConfig cfg;
  cfg.problem.m = 50;
  const auto a = run_benchmark(cfg);
  const auto b = run_benchmark(cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace.rows[i].err, b.trace.rows[i].err);
  std::ostringstream sa, sb;
  write_summary_csv(sa, {a}, false);
  write_summary_csv(sb, {b}, false);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "problem,solver,m,n,seed,iters,final_err,elapsed_s");
}

TEST(Benchmark, DefaultFixedSteps) {
  EXPECT_DOUBLE_EQ(default_fixed_lambda(SolverKind::frb, 0.0, 2.0), 0.9 / 4.0);
  EXPECT_DOUBLE_EQ(default_fixed_lambda(SolverKind::gfrb_fixed, -0.5, 1.0), 0.9 / 3.0);
  EXPECT_THROW(default_fixed_lambda(SolverKind::gfrb_adaptive, 0.1, 1.0), ParameterError);
  EXPECT_THROW(default_fixed_lambda(SolverKind::frb, 0.0, 0.0), ParameterError);
}

TEST(Composite, Construction) {
  const auto inst = gen_composite(50, 1);
  EXPECT_EQ(inst.problem.k.in_dim, 50);
  EXPECT_EQ(inst.problem.k.out_dim, 49);
  EXPECT_LE(inst.norm_k, 2.0);
  EXPECT_GT(inst.norm_k, 1.9);
  EXPECT_THROW(gen_composite(1, 1), ParameterError);
}
