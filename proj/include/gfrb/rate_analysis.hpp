#pragma once

// Linear convergence rates of constant-step GFRB on linear problems.
//
// With A = 0 and B linear, GFRB is the fixed-point iteration
// u_{k+1} = M u_k on u_k = (x_k, x_{k-1}, x_{k-2}) with
//
//       [ I - l(d+2) B   l(2d+1) B   -l d B ]
//   M = [ I              0            0     ]
//       [ 0              I            0     ]
//
// and the asymptotic rate is the spectral radius of M.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "gfrb/operators.hpp"

namespace gfrb {

struct FixedPointMatrix {
  Matrix entries;
  Eigen::Index block = 0;  // n, the dimension of x
};

FixedPointMatrix build_matrix(const Matrix& b, double lambda, double delta);

std::vector<std::complex<double>> eigenvalues(const Matrix& m);

/// Max eigenvalue modulus of a dense matrix.
double spectral_radius(const Matrix& m);
inline double spectral_radius(const FixedPointMatrix& m) { return spectral_radius(m.entries); }

/// Roots of a real polynomial, coefficients in descending order
/// (leading coefficient first), via companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& descending);

/// Degree-6 characteristic polynomial of M for B = rotation and
/// lambda = 1/(2|delta| + 2), coefficients in descending order:
///   (z^3 - z^2)^2 + lambda^2 ((d+2) z^2 - (2d+1) z + d)^2.
std::vector<double> characteristic_polynomial(double delta);

/// The six roots of characteristic_polynomial(delta).
std::vector<std::complex<double>> characteristic_roots(double delta);

enum class SchurCohnBranch { delta_positive, delta_negative };

/// Schur-Cohn determinants of q(z) = p_i(z / sqrt2) * 2 sqrt2, the rotation
/// problem's cubic factor rescaled so that |z| = 1/sqrt2 maps to the unit
/// circle.
struct SchurCohnPair {
  double d1 = 0.0;
  double d2 = 0.0;
  SchurCohnBranch branch = SchurCohnBranch::delta_positive;
  /// The same determinants evaluated from the complex coefficients
  /// a, b, c directly: D1 = 1 - |c|^2, D2 = (1 - |c|^2)^2 - |a - b conj(c)|^2.
  double d1_from_coefficients = 0.0;
  double d2_from_coefficients = 0.0;
};

/// Closed-form D1, D2 for delta != 0 (DomainError at delta = 0).
SchurCohnPair schur_cohn(double delta);

struct RateDesign {
  double r = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  /// Roots of z^3 - a z^2 - a z + c with a = (2d+1)/(3(d+1)), c = d/(3(d+1)).
  std::array<std::complex<double>, 3> roots{};
  /// |cubic(1/r)|.
  double residual = 0.0;
  /// True when 1/r has the largest modulus among the roots.
  bool inverse_rate_dominant = false;
};

template <class T>
struct DesignParameters {
  T delta;
  T lambda;
};

/// delta = (r^2 + r - 3) / (r^3 - 2r^2 - 2r + 3), lambda = 1 / (3(delta + 1)),
/// evaluated in T without domain checks (see design_rate).
template <class T>
DesignParameters<T> design_parameters(const T& r) {
  const T delta = (r * r + r - T(3)) / (r * r * r - T(2) * r * r - T(2) * r + T(3));
  return {delta, T(1) / (T(3) * (delta + T(1)))};
}

/// (delta, lambda) for which x_{k+1} = x_0 / r^k under exact seeding on
/// A = 0, B = I. Rejects r in {1, (-1+sqrt13)/2, (1+sqrt13)/2} and any other
/// r for which delta or lambda is undefined.
RateDesign design_rate(double r);

enum class LambdaRule { two_delta_plus_two, three_delta_plus_three, two_delta_plus_three };

double lambda_for_rule(LambdaRule rule, double delta);
std::string to_string(LambdaRule rule);
inline constexpr std::array<LambdaRule, 3> kLambdaRules = {
    LambdaRule::two_delta_plus_two, LambdaRule::three_delta_plus_three,
    LambdaRule::two_delta_plus_three};

struct RateRow {
  double delta = 0.0;
  LambdaRule rule = LambdaRule::two_delta_plus_two;
  double lambda = 0.0;
  double rho = 0.0;
};

/// rho(M) on the rotation problem for every (delta, rule) pair.
std::vector<RateRow> rate_table(const std::vector<double>& deltas);

/// The 22 delta values of the reference spectral-radius grid.
const std::vector<double>& reference_table_deltas();

}  // namespace gfrb
