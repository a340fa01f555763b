#include <gtest/gtest.h>

#include <cmath>

#include "gfrb/experiments.hpp"
#include "gfrb/primal_dual.hpp"
#include "test_support.hpp"

using namespace gfrb;
using gfrb::testing::CountingForward;
using gfrb::testing::dense_resolvent;
using gfrb::testing::random_monotone;

TEST(StepsizeCheck, Inequality) {
  const auto ok = check_stepsizes(0.1, 0.1, 0.5, 1.0, 1.0);
  EXPECT_TRUE(ok.admissible);
  EXPECT_NEAR(ok.slack, 1.0 - (0.3 + 0.01), 1e-15);
  EXPECT_FALSE(check_stepsizes(0.4, 0.4, 0.5, 1.0, 1.0).admissible);
  // Boundary is excluded.
  EXPECT_FALSE(check_stepsizes(0.5, 1.0, 0.0, 0.5, 1.0).admissible);
  EXPECT_EQ(check_stepsizes(0.1, 0.1, -2.0, 1.0, 1.0).slack,
            check_stepsizes(0.1, 0.1, 2.0, 1.0, 1.0).slack);
  EXPECT_THROW(check_stepsizes(0.0, 0.1, 0.0, 1.0, 1.0), ParameterError);
}

TEST(Region, GridAndShrinkage) {
  const auto cells = admissible_region(0.0, 1.0, 1.0, 10);
  ASSERT_EQ(cells.size(), 100u);
  EXPECT_DOUBLE_EQ(cells.front().tau, 0.1);
  EXPECT_DOUBLE_EQ(cells.back().sigma, 1.0);
  EXPECT_LT(admissible_fraction(admissible_region(1.0, 1.0, 1.0, 200)),
            admissible_fraction(admissible_region(0.0, 1.0, 1.0, 200)));
  EXPECT_THROW(admissible_region(0.0, 1.0, 1.0, 0), ParameterError);
}

TEST(Balanced, SplitsBudget) {
  const auto cfg = EPDTRConfig::balanced(0.5, 2.0, 3.0);
  EXPECT_NEAR(2.0 * cfg.tau * 1.5 * 2.0, 0.475, 1e-14);
  EXPECT_NEAR(cfg.tau * cfg.sigma * 9.0, 0.475, 1e-14);
  EXPECT_NEAR(check_stepsizes(cfg.tau, cfg.sigma, 0.5, 2.0, 3.0).slack, 0.05, 1e-14);
}

// w = J_{sigma C^{-1}}(y) satisfies w + sigma C^{-1} w = y; for linear
// invertible C this is (I + sigma C^{-1}) w = y.
TEST(ResolventOfInverse, LinearIdentity) {
  Rng rng(21, 0);
  const Matrix h = rng.normal_matrix(4, 4);
  const Matrix c = h * h.transpose() + Matrix::Identity(4, 4);
  const Matrix c_inv = c.inverse();
  const auto jc = dense_resolvent(c);
  for (double sigma : {0.1, 1.0, 10.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vector y = rng.normal_vector(4);
      const Vector w = resolvent_of_inverse(jc, sigma, y);
      EXPECT_LT((w + sigma * c_inv * w - y).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(ResolventOfInverse, L1GivesBoxProjection) {
  const auto j = inverse_resolvent(l1_resolvent(0.5));
  Vector y(3);
  y << 2.0, -0.2, -7.0;
  const Vector w = j(y, 3.0);
  EXPECT_NEAR(w[0], 0.5, 1e-14);
  EXPECT_NEAR(w[1], -0.2, 1e-14);
  EXPECT_NEAR(w[2], -0.5, 1e-14);
}

TEST(Epdtr, OneForwardEvaluationPerStep) {
  const auto inst = gen_composite(30, 1);
  CountingForward counted(inst.problem.forward);
  PrimalDualProblem problem = inst.problem;
  problem.forward = counted.op;
  const auto cfg = EPDTRConfig::balanced(0.5, inst.lipschitz, inst.norm_k);
  PrimalDualState s = make_primal_dual_state(problem, Vector::Zero(30), Vector::Zero(29));
  EXPECT_EQ(*counted.calls, 1);
  for (int k = 0; k < 10; ++k) s = epdtr_step(s, cfg, problem);
  EXPECT_EQ(*counted.calls, 11);
  EXPECT_EQ(s.k, 10);
}

TEST(Epdtr, ResidualsAtTermination) {
  const auto inst = gen_composite(100, 2);
  for (double b : {0.0, 0.5, 1.0}) {
    const auto cfg = EPDTRConfig::balanced(b, inst.lipschitz, inst.norm_k);
    const auto r = epdtr_solve(inst.problem, cfg, Vector::Zero(100), Vector::Zero(99),
                               StopRule{1e-9, 100000});
    EXPECT_TRUE(r.converged) << "b=" << b;
    EXPECT_LE(r.residuals.primal, 1e-8);
    EXPECT_LE(r.residuals.dual, 1e-8);
    EXPECT_TRUE(r.warnings.empty());
  }
}

TEST(Epdtr, WarnsOnInadmissibleSteps) {
  const auto inst = gen_composite(20, 3);
  const EPDTRConfig cfg{0.6, 0.6, 0.0};
  const auto r = epdtr_solve(inst.problem, cfg, Vector::Zero(20), Vector::Zero(19), StopRule{1e-6, 5});
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(Epdtr, DimensionChecks) {
  const auto inst = gen_composite(20, 3);
  EXPECT_THROW(make_primal_dual_state(inst.problem, Vector::Zero(19), Vector::Zero(19)),
               DimensionError);
}

TEST(MetricOracle, RejectsIndefiniteMetric) {
  Rng rng(22, 0);
  LinearPrimalDualInstance inst;
  inst.a = random_monotone(rng, 3);
  inst.b = random_monotone(rng, 3);
  inst.k = 10.0 * rng.normal_matrix(2, 3);
  inst.c_inv = random_monotone(rng, 2);
  const EPDTRConfig cfg{1.0, 1.0, 0.0};
  const Vector z = Vector::Zero(5);
  EXPECT_THROW(gfrb_in_metric(inst, cfg, z, z, z, 3), DomainError);
}
