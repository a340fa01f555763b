#include <gtest/gtest.h>

#include <cmath>

#include "gfrb/errors.hpp"
#include "gfrb/stepsize.hpp"

using namespace gfrb;

TEST(Gamma, Terms) {
  const auto g = GammaSpec::geometric(0.5, 1.0);
  EXPECT_DOUBLE_EQ(g.term(1), 0.5);
  EXPECT_DOUBLE_EQ(g.term(3), 0.125);
  const auto s = GammaSpec::inverse_square(2.0);
  EXPECT_DOUBLE_EQ(s.term(1), 2.0);
  EXPECT_DOUBLE_EQ(s.term(4), 0.125);
  EXPECT_EQ(GammaSpec::zero().term(5), 0.0);
}

TEST(Gamma, Validation) {
  EXPECT_THROW(GammaSpec::geometric(1.0).validate(), ParameterError);
  EXPECT_THROW(GammaSpec::geometric(0.5, 0.0).validate(), ParameterError);
  EXPECT_NO_THROW(GammaSpec::zero().validate());
  EXPECT_EQ(gamma_kind_from_string("inverse_square"), GammaSpec::Kind::inverse_square);
  EXPECT_THROW(gamma_kind_from_string("harmonic"), ParameterError);
}

TEST(StepSizeParams, Defaults) {
  const auto p = StepSizeParams::defaults_for(0.1);
  const double bound = (1.0 - 1e-4) / 2.2;
  EXPECT_DOUBLE_EQ(p.c2_bound(0.1), bound);
  EXPECT_DOUBLE_EQ(p.c2, 0.99 * bound);
  EXPECT_DOUBLE_EQ(p.c1, 0.9 * p.c2);
  EXPECT_DOUBLE_EQ(p.lambda0, 0.1);
  EXPECT_DOUBLE_EQ(p.lambda_minus1, 0.1);
  EXPECT_NO_THROW(p.validate(0.1));
  // The bound depends on |delta|.
  EXPECT_DOUBLE_EQ(p.c2_bound(-0.1), bound);
}

TEST(StepSizeParams, ValidationNamesField) {
  auto p = StepSizeParams::defaults_for(0.1);
  p.c1 = p.c2;
  try {
    p.validate(0.1);
    FAIL() << "expected ParameterError";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("c1"), std::string::npos);
  }
  p = StepSizeParams::defaults_for(0.1);
  p.c2 = p.c2_bound(0.1);
  try {
    p.validate(0.1);
    FAIL() << "expected ParameterError";
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("c2"), std::string::npos);
  }
  p = StepSizeParams::defaults_for(0.1);
  p.lambda0 = 0.0;
  EXPECT_THROW(p.validate(0.1), ParameterError);
  // Defaults for delta = 0.1 violate the tighter bound for delta = 1.
  EXPECT_THROW(StepSizeParams::defaults_for(0.1).validate(1.0), ParameterError);
}

TEST(StepSizeState, GrowthBranch) {
  const auto p = StepSizeParams::defaults_for(0.1, 0.2);
  StepSizeState s(p, 0.1);
  // dB / dx = 1 <= c2 / lambda = 0.45 / 0.2
  EXPECT_DOUBLE_EQ(s.next_step(1.0, 1.0), 0.2 * 1.5);
  EXPECT_FALSE(s.last_was_contraction());
  EXPECT_DOUBLE_EQ(s.next_step(1.0, 1.0), 0.3 * 1.25);
  EXPECT_DOUBLE_EQ(s.lambda_prev2(), 0.3);
  EXPECT_EQ(s.updates(), 2);
}

TEST(StepSizeState, ContractionBranch) {
  const auto p = StepSizeParams::defaults_for(0.1, 0.2);
  StepSizeState s(p, 0.1);
  const double lambda = s.next_step(1.0, 10.0);
  EXPECT_TRUE(s.last_was_contraction());
  EXPECT_DOUBLE_EQ(lambda, p.c1 * 1.0 / 10.0);
}

TEST(StepSizeState, TieTakesGrowthBranch) {
  auto p = StepSizeParams::defaults_for(0.0, 0.25);
  p.c2 = 0.25;
  p.c1 = 0.2;
  p.epsilon = 1e-4;
  p.gamma = GammaSpec::zero();
  StepSizeState s(p, 0.0);
  // c2 / lambda = 1 and dB = dx exactly
  EXPECT_DOUBLE_EQ(s.next_step(2.0, 2.0), 0.25);
  EXPECT_FALSE(s.last_was_contraction());
}

TEST(StepSizeState, LowerBoundUnderLipschitzData) {
  // For any dB <= L dx, lambda_k >= min(c1 / L, lambda0).
  const double lipschitz = 7.0;
  const auto p = StepSizeParams::defaults_for(0.3, 1.0);
  StepSizeState s(p, 0.3);
  const double floor = std::min(p.c1 / lipschitz, p.lambda0);
  for (int k = 0; k < 200; ++k) {
    const double ratio = lipschitz * (0.5 + 0.5 * std::sin(k));
    EXPECT_GE(s.next_step(1.0, ratio), floor - 1e-15);
  }
}

TEST(StepSizeState, ZeroDisplacement) {
  StepSizeState s(StepSizeParams::defaults_for(0.1), 0.1);
  EXPECT_NO_THROW(s.next_step(0.0, 0.0));
  EXPECT_THROW(s.next_step(0.0, 1e-3), InconsistentOperatorError);
  EXPECT_THROW(s.next_step(-1.0, 0.0), ParameterError);
}
