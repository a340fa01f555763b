#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "gfrb/operators.hpp"
#include "gfrb/rng.hpp"
#include "test_support.hpp"

using namespace gfrb;

TEST(SoftThreshold, Examples) {
  Vector z(5);
  z << 3.0, -3.0, 0.5, -1.0, 1.0;
  const Vector out = soft_threshold<double>(z, 1.0);
  Vector expected(5);
  expected << 2.0, -2.0, 0.0, 0.0, 0.0;
  EXPECT_EQ(out, expected);
}

TEST(SoftThreshold, RejectsNonPositiveThreshold) {
  EXPECT_THROW(soft_threshold<double>(Vector::Ones(3), 0.0), ParameterError);
  EXPECT_THROW(soft_threshold<double>(Vector::Ones(3), -1.0), ParameterError);
}

TEST(L1Resolvent, ScalesThreshold) {
  const auto j = l1_resolvent(0.5);
  Vector z(2);
  z << 2.0, -0.4;
  // threshold = 0.5 * lambda = 1
  const Vector out = j(z, 2.0);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], 0.0);
}

// <J(x) - J(y), x - y> >= ||J(x) - J(y)||^2 for any resolvent.
TEST(L1Resolvent, FirmlyNonexpansive) {
  const auto j = l1_resolvent(1.0);
  Rng rng(1, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x = rng.normal_vector(8, 2.0);
    const Vector y = rng.normal_vector(8, 2.0);
    const double lambda = 0.1 + 2.0 * rng.uniform();
    const Vector d = j(x, lambda) - j(y, lambda);
    EXPECT_GE(d.dot(x - y), d.squaredNorm() - 1e-12);
  }
}

TEST(SymmetricAffineResolvent, MatchesDenseSolve) {
  Rng rng(2, 0);
  const Matrix r = rng.normal_matrix(6, 6);
  const Matrix e = 0.5 * (r + r.transpose());
  const double beta = Eigen::SelfAdjointEigenSolver<Matrix>(e).eigenvalues().cwiseAbs().maxCoeff();
  const auto j = SymmetricAffineResolvent::make(e, beta);
  const Matrix a = e + beta * Matrix::Identity(6, 6);
  for (double lambda : {0.01, 0.5, 3.0}) {
    const Vector z = rng.normal_vector(6);
    const Vector expected = (Matrix::Identity(6, 6) + lambda * a).partialPivLu().solve(z);
    EXPECT_LT((j(z, lambda) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SymmetricAffineResolvent, SingularDenominatorThrows) {
  Matrix e = Matrix::Zero(2, 2);
  e(0, 0) = -3.0;
  // 1 + lambda (beta + eig) = 1 + 1 * (1 - 3) = -1 <= 0
  const SymmetricAffineResolvent j(e, 1.0);
  EXPECT_THROW(j(Vector::Ones(2), 1.0), SingularResolventError);
  EXPECT_NO_THROW(j(Vector::Ones(2), 0.25));
}

TEST(SpectralNorm, MatchesSingularValues) {
  Rng rng(3, 0);
  for (auto [rows, cols] : {std::pair{5, 3}, std::pair{3, 7}, std::pair{4, 4}}) {
    const Matrix m = rng.normal_matrix(rows, cols);
    const double expected = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    EXPECT_NEAR(spectral_norm(m), expected, 1e-10 * expected);
  }
}

TEST(PowerNorm, ApproachesSpectralNormFromBelow) {
  Rng rng(4, 0);
  const Matrix k = rng.normal_matrix(12, 9);
  const double exact = spectral_norm(k);
  const double estimate = power_norm(matrix_map(k));
  EXPECT_LE(estimate, exact * (1.0 + 1e-12));
  EXPECT_NEAR(estimate, exact, 1e-4 * exact);
  EXPECT_EQ(power_norm(matrix_map(k)), estimate);
}

TEST(PowerNorm, ZeroMap) { EXPECT_EQ(power_norm(matrix_map(Matrix::Zero(3, 4))), 0.0); }

// <K x, y> = <x, K^* y>
TEST(MatrixMap, AdjointIdentity) {
  Rng rng(5, 0);
  const LinearMap k = matrix_map(rng.normal_matrix(4, 6));
  EXPECT_EQ(k.in_dim, 6);
  EXPECT_EQ(k.out_dim, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = rng.normal_vector(6);
    const Vector y = rng.normal_vector(4);
    EXPECT_NEAR(k.apply(x).dot(y), x.dot(k.apply_adjoint(y)), 1e-12);
  }
}

TEST(ForwardOperators, AffineLipschitzAndMonotone) {
  Rng rng(6, 0);
  const Matrix m = gfrb::testing::random_monotone(rng, 7);
  const Vector b = rng.normal_vector(7);
  const auto op = make_affine_forward(m, b);
  ASSERT_TRUE(op.lipschitz_hint);
  EXPECT_NEAR(*op.lipschitz_hint, spectral_norm(m), 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = rng.normal_vector(7);
    const Vector y = rng.normal_vector(7);
    const Vector d = op(x) - op(y);
    EXPECT_GE(d.dot(x - y), -1e-12);
    EXPECT_LE(d.norm(), *op.lipschitz_hint * (x - y).norm() * (1.0 + 1e-12));
  }
}

TEST(ForwardOperators, LassoGradient) {
  Rng rng(7, 0);
  const Matrix a = rng.normal_matrix(5, 8);
  const Vector y = rng.normal_vector(5);
  const auto op = make_lasso_forward(a, y);
  const Vector x = rng.normal_vector(8);
  EXPECT_LT((op(x) - a.transpose() * (a * x - y)).cwiseAbs().maxCoeff(), 1e-12);
  const double n = spectral_norm(a);
  EXPECT_NEAR(*op.lipschitz_hint, n * n, 1e-10);
}

TEST(Rotation, SkewAndNormPreserving) {
  const Matrix r = rotation_matrix();
  EXPECT_EQ(r + r.transpose(), Matrix::Zero(2, 2));
  const auto op = linear_forward<double>(r, 1.0);
  Vector x(2);
  x << 0.3, -1.2;
  EXPECT_DOUBLE_EQ(op(x).dot(x), 0.0);
  EXPECT_NEAR(op(x).norm(), x.norm(), 1e-15);
}
