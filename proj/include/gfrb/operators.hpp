#pragma once

// Operator abstractions for monotone inclusions 0 in (A + B)(x).
//
// A enters only through its resolvent J_{lambda A} = (I + lambda A)^{-1};
// B is single-valued and evaluated forward. Both are plain callables so
// problem generators can close over whatever data they need. Instances are
// immutable after construction and may be shared across threads.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "gfrb/errors.hpp"

namespace gfrb {

template <class T>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorT<double>;
using Matrix = MatrixT<double>;

/// Single-valued operator B evaluated forward.
template <class T>
struct BasicForwardOperator {
  std::function<VectorT<T>(const VectorT<T>&)> evaluate;
  /// Known Lipschitz constant, used only for step-size warnings.
  std::optional<double> lipschitz_hint;

  VectorT<T> operator()(const VectorT<T>& x) const { return evaluate(x); }
};

/// Resolvent z -> (I + lambda A)^{-1} z of a maximally monotone A.
template <class T>
struct BasicResolventOperator {
  std::function<VectorT<T>(const VectorT<T>&, T)> resolve;

  VectorT<T> operator()(const VectorT<T>& z, T lambda) const { return resolve(z, lambda); }
};

using ForwardOperator = BasicForwardOperator<double>;
using ResolventOperator = BasicResolventOperator<double>;

/// Linear map K : R^n -> R^m together with its adjoint.
struct LinearMap {
  Eigen::Index in_dim = 0;
  Eigen::Index out_dim = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_adjoint;
  std::optional<double> norm_hint;
};

/// Resolvent of the zero operator.
template <class T>
BasicResolventOperator<T> identity_resolvent() {
  return {[](const VectorT<T>& z, T) { return z; }};
}

/// B(x) = M x with L = ||M||_2 supplied by the caller (or left unset).
template <class T>
BasicForwardOperator<T> linear_forward(MatrixT<T> m, std::optional<double> lipschitz = std::nullopt) {
  auto shared = std::make_shared<const MatrixT<T>>(std::move(m));
  return {[shared](const VectorT<T>& x) -> VectorT<T> { return (*shared) * x; }, lipschitz};
}

/// Componentwise soft-thresholding, the resolvent of lambda * d||.||_1.
template <class T>
VectorT<T> soft_threshold(const VectorT<T>& z, T lambda) {
  if (!(lambda > T(0))) throw ParameterError("soft_threshold: lambda must be positive");
  VectorT<T> out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const T zi = z[i];
    if (zi > lambda) {
      out[i] = zi - lambda;
    } else if (zi < -lambda) {
      out[i] = zi + lambda;
    } else {
      out[i] = T(0);
    }
  }
  return out;
}

/// Soft-threshold resolvent with threshold scale * lambda, i.e. J_{lambda A}
/// for A = scale * d||.||_1.
ResolventOperator l1_resolvent(double scale = 1.0);

/// Spectral norm ||M||_2 via the eigenvalues of the smaller Gram matrix.
double spectral_norm(const Matrix& m);

/// Resolvent of A(x) = (E + beta I) x with E symmetric.
///
/// The eigendecomposition E = P diag(eigs) P^T is computed once at
/// construction; each call costs two dense mat-vecs.
class SymmetricAffineResolvent {
public:
  SymmetricAffineResolvent(const Matrix& e, double beta);

  Vector operator()(const Vector& z, double lambda) const;

  const Matrix& basis() const { return basis_; }
  const Vector& eigenvalues() const { return eigs_; }
  double beta() const { return beta_; }

  /// Shareable ResolventOperator view over this cached factorization.
  static ResolventOperator make(const Matrix& e, double beta);

private:
  Matrix basis_;
  Vector eigs_;
  double beta_;
};

/// J_{lambda A}(z) = P diag(1 / (1 + lambda (beta + eigs_i))) P^T z.
/// Throws SingularResolventError if any 1 + lambda (beta + eigs_i) <= 0.
Vector resolvent_symmetric_affine(const Vector& z, double lambda, const Matrix& p,
                                  const Vector& eigs, double beta);

/// Dense matrix as a LinearMap (adjoint = transpose).
LinearMap matrix_map(Matrix k, std::optional<double> norm_hint = std::nullopt);

/// Power iteration on K^*K. Returns sqrt of the Rayleigh quotient, which
/// never exceeds ||K||_2. The start vector is drawn from a fixed seed so
/// repeated calls agree bit for bit.
double power_norm(const LinearMap& k, int max_iter = 500, double tol = 1e-8,
                  std::uint64_t seed = 0x5eed);

/// B(x) = M x + b, L = ||M||_2.
ForwardOperator make_affine_forward(const Matrix& m, const Vector& b);

/// B(x) = A^T (A x - y), L = ||A||_2^2.
ForwardOperator make_lasso_forward(const Matrix& a, const Vector& y);

/// The 2x2 skew operator [[0, -1], [1, 0]].
Matrix rotation_matrix();

}  // namespace gfrb
