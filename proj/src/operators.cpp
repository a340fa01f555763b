#include "gfrb/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "gfrb/rng.hpp"

namespace gfrb {

ResolventOperator l1_resolvent(double scale) {
  if (!(scale > 0.0)) throw ParameterError("l1_resolvent: scale must be positive");
  return {[scale](const Vector& z, double lambda) { return soft_threshold(z, scale * lambda); }};
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("spectral_norm: eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

SymmetricAffineResolvent::SymmetricAffineResolvent(const Matrix& e, double beta) : beta_(beta) {
  if (e.rows() != e.cols()) throw DimensionError("SymmetricAffineResolvent: E must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(e);
  if (solver.info() != Eigen::Success)
    throw NumericalError("SymmetricAffineResolvent: eigendecomposition failed");
  basis_ = solver.eigenvectors();
  eigs_ = solver.eigenvalues();
}

Vector SymmetricAffineResolvent::operator()(const Vector& z, double lambda) const {
  return resolvent_symmetric_affine(z, lambda, basis_, eigs_, beta_);
}

ResolventOperator SymmetricAffineResolvent::make(const Matrix& e, double beta) {
  auto cached = std::make_shared<const SymmetricAffineResolvent>(e, beta);
  return {[cached](const Vector& z, double lambda) { return (*cached)(z, lambda); }};
}

Vector resolvent_symmetric_affine(const Vector& z, double lambda, const Matrix& p,
                                  const Vector& eigs, double beta) {
  if (p.rows() != z.size() || p.cols() != eigs.size())
    throw DimensionError("resolvent_symmetric_affine: dimension mismatch");
  Vector coeffs = p.transpose() * z;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double denom = 1.0 + lambda * (beta + eigs[i]);
    if (!(denom > 0.0)) {
      std::ostringstream msg;
      msg << "resolvent_symmetric_affine: 1 + lambda(beta + eig_" << i << ") = " << denom
          << " <= 0";
      throw SingularResolventError(msg.str());
    }
    coeffs[i] /= denom;
  }
  return p * coeffs;
}

LinearMap matrix_map(Matrix k, std::optional<double> norm_hint) {
  auto shared = std::make_shared<const Matrix>(std::move(k));
  LinearMap map;
  map.in_dim = shared->cols();
  map.out_dim = shared->rows();
  map.apply = [shared](const Vector& x) -> Vector { return (*shared) * x; };
  map.apply_adjoint = [shared](const Vector& y) -> Vector { return shared->transpose() * y; };
  map.norm_hint = norm_hint;
  return map;
}

double power_norm(const LinearMap& k, int max_iter, double tol, std::uint64_t seed) {
  if (max_iter < 1) throw ParameterError("power_norm: max_iter must be >= 1");
  if (!(tol > 0.0)) throw ParameterError("power_norm: tol must be positive");
  if (k.in_dim == 0 || k.out_dim == 0) return 0.0;

  Rng rng(seed, 0);
  Vector v = rng.normal_vector(k.in_dim);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = k.apply_adjoint(k.apply(v));
    // Rayleigh quotient of K^*K at unit v.
    const double rayleigh = v.dot(w);
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    const double next = std::sqrt(std::max(0.0, rayleigh));
    const bool settled = std::abs(next - estimate) <= tol * next;
    estimate = next;
    v = w / norm_w;
    if (settled && it > 0) break;
  }
  return estimate;
}

ForwardOperator make_affine_forward(const Matrix& m, const Vector& b) {
  if (m.rows() != m.cols()) throw DimensionError("make_affine_forward: M must be square");
  if (b.size() != m.rows()) throw DimensionError("make_affine_forward: b has wrong dimension");
  auto mat = std::make_shared<const Matrix>(m);
  auto shift = std::make_shared<const Vector>(b);
  return {[mat, shift](const Vector& x) -> Vector { return (*mat) * x + *shift; },
          spectral_norm(m)};
}

ForwardOperator make_lasso_forward(const Matrix& a, const Vector& y) {
  if (y.size() != a.rows()) throw DimensionError("make_lasso_forward: y must have A.rows() entries");
  auto design = std::make_shared<const Matrix>(a);
  auto obs = std::make_shared<const Vector>(y);
  const double norm = spectral_norm(a);
  return {[design, obs](const Vector& x) -> Vector {
            const Vector residual = (*design) * x - *obs;
            return design->transpose() * residual;
          },
          norm * norm};
}

Matrix rotation_matrix() {
  Matrix b(2, 2);
  b << 0.0, -1.0, 1.0, 0.0;
  return b;
}

}  // namespace gfrb
