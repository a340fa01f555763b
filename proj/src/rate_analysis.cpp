#include "gfrb/rate_analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfrb {

FixedPointMatrix build_matrix(const Matrix& b, double lambda, double delta) {
  if (b.rows() != b.cols()) throw DimensionError("build_matrix: B must be square");
  const Eigen::Index n = b.rows();
  const Matrix id = Matrix::Identity(n, n);
  FixedPointMatrix m;
  m.block = n;
  m.entries = Matrix::Zero(3 * n, 3 * n);
  m.entries.block(0, 0, n, n) = id - lambda * (delta + 2.0) * b;
  m.entries.block(0, n, n, n) = lambda * (2.0 * delta + 1.0) * b;
  m.entries.block(0, 2 * n, n, n) = -lambda * delta * b;
  m.entries.block(n, 0, n, n) = id;
  m.entries.block(2 * n, n, n, n) = id;
  return m;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigenvalues: QR iteration did not converge for a " << m.rows() << "x" << m.cols()
        << " matrix (max |entry| = " << m.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const Matrix& m) {
  double rho = 0.0;
  for (const auto& ev : eigenvalues(m)) rho = std::max(rho, std::abs(ev));
  return rho;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& descending) {
  auto first = std::find_if(descending.begin(), descending.end(), [](double c) { return c != 0.0; });
  if (first == descending.end()) throw DomainError("polynomial_roots: zero polynomial");
  const std::vector<double> coeffs(first, descending.end());
  const auto degree = static_cast<Eigen::Index>(coeffs.size()) - 1;
  if (degree == 0) return {};

  Matrix companion = Matrix::Zero(degree, degree);
  for (Eigen::Index j = 0; j < degree; ++j)
    companion(0, j) = -coeffs[static_cast<std::size_t>(j + 1)] / coeffs[0];
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  return eigenvalues(companion);
}

std::vector<double> characteristic_polynomial(double delta) {
  const double lambda = 1.0 / (2.0 * std::abs(delta) + 2.0);
  const double l2 = lambda * lambda;
  // q(z) = (d+2) z^2 - (2d+1) z + d; q^2 expanded.
  const double q2 = delta + 2.0;
  const double q1 = -(2.0 * delta + 1.0);
  const double q0 = delta;
  // (z^3 - z^2)^2 = z^6 - 2 z^5 + z^4.
  return {1.0,
          -2.0,
          1.0 + l2 * q2 * q2,
          l2 * 2.0 * q2 * q1,
          l2 * (q1 * q1 + 2.0 * q2 * q0),
          l2 * 2.0 * q1 * q0,
          l2 * q0 * q0};
}

std::vector<std::complex<double>> characteristic_roots(double delta) {
  return polynomial_roots(characteristic_polynomial(delta));
}

SchurCohnPair schur_cohn(double delta) {
  if (delta == 0.0 || !std::isfinite(delta))
    throw DomainError("schur_cohn: delta must be finite and nonzero");
  SchurCohnPair out;
  const double d = delta;
  const double sqrt2 = std::sqrt(2.0);
  using cplx = std::complex<double>;
  const cplx i(0.0, 1.0);
  cplx a, b, c;
  if (d > 0.0) {
    out.branch = SchurCohnBranch::delta_positive;
    out.d1 = (-d * d + 2.0 * d + 1.0) / ((d + 1.0) * (d + 1.0));
    out.d2 = (3.0 * std::pow(d, 4) + 6.0 * std::pow(d, 3) + 5.0 * d * d + 12.0 * d + 6.0) /
             (2.0 * std::pow(d + 1.0, 4));
    a = -sqrt2 + i * sqrt2 * (d + 2.0) / (2.0 * (d + 1.0));
    b = -i * (2.0 * d + 1.0) / (d + 1.0);
    c = i * sqrt2 * d / (d + 1.0);
  } else {
    out.branch = SchurCohnBranch::delta_negative;
    const double c_abs2 = 2.0 * d * d / ((1.0 - d) * (1.0 - d));
    out.d1 = 1.0 - c_abs2;
    out.d2 = -(3.0 * std::pow(d, 4) - 6.0 * std::pow(d, 3) + 5.0 * d * d - 12.0 * d + 6.0) /
             (2.0 * std::pow(d - 1.0, 4));
    a = -sqrt2 + i * sqrt2 * (d + 2.0) / (2.0 * (1.0 - d));
    b = -i * (2.0 * d + 1.0) / (1.0 - d);
    c = i * sqrt2 * d / (1.0 - d);
  }
  const double one_minus_c2 = 1.0 - std::norm(c);
  out.d1_from_coefficients = one_minus_c2;
  out.d2_from_coefficients = one_minus_c2 * one_minus_c2 - std::norm(a - b * std::conj(c));
  return out;
}

namespace {

bool near(double x, double target) {
  return std::abs(x - target) <= 1e-12 * std::max(1.0, std::abs(target));
}

}  // namespace

RateDesign design_rate(double r) {
  if (!std::isfinite(r)) throw DomainError("design_rate: r must be finite");
  const double sqrt13 = std::sqrt(13.0);
  if (near(r, 1.0) || near(r, (-1.0 + sqrt13) / 2.0) || near(r, (1.0 + sqrt13) / 2.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design_rate: r=" << r
        << " is excluded; r must avoid {1, (-1+sqrt(13))/2, (1+sqrt(13))/2}";
    throw DomainError(msg.str());
  }
  if (r == 0.0) throw DomainError("design_rate: r = 0 gives no rate 1/r");

  const double denom = r * r * r - 2.0 * r * r - 2.0 * r + 3.0;
  const double scale = std::abs(r * r * r) + 2.0 * r * r + 2.0 * std::abs(r) + 3.0;
  if (std::abs(denom) <= 1e-12 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design_rate: r=" << r << " is a root of (r-1)(r^2-r-3); delta is undefined";
    throw DomainError(msg.str());
  }
  RateDesign out;
  out.r = r;
  out.delta = design_parameters(r).delta;
  if (std::abs(out.delta + 1.0) <= 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design_rate: r=" << r << " gives delta = -1, so lambda = 1/(3(delta+1)) is undefined";
    throw DomainError(msg.str());
  }
  out.lambda = design_parameters(r).lambda;

  const double a = (2.0 * out.delta + 1.0) / (3.0 * (out.delta + 1.0));
  const double c = out.delta / (3.0 * (out.delta + 1.0));
  const auto roots = polynomial_roots({1.0, -a, -a, c});
  std::copy(roots.begin(), roots.end(), out.roots.begin());

  const long double z = 1.0L / static_cast<long double>(r);
  const long double la = a;
  const long double lc = c;
  out.residual = static_cast<double>(std::abs(((z - la) * z - la) * z + lc));

  double other = 0.0;
  for (const auto& root : out.roots) {
    if (std::abs(root - std::complex<double>(1.0 / r, 0.0)) > 1e-8 * std::max(1.0, std::abs(1.0 / r)))
      other = std::max(other, std::abs(root));
  }
  out.inverse_rate_dominant = std::abs(1.0 / r) >= other;
  return out;
}

double lambda_for_rule(LambdaRule rule, double delta) {
  switch (rule) {
    case LambdaRule::two_delta_plus_two:
      return 1.0 / (2.0 * delta + 2.0);
    case LambdaRule::three_delta_plus_three:
      return 1.0 / (3.0 * delta + 3.0);
    case LambdaRule::two_delta_plus_three:
      return 1.0 / (2.0 * delta + 3.0);
  }
  return 0.0;
}

std::string to_string(LambdaRule rule) {
  switch (rule) {
    case LambdaRule::two_delta_plus_two:
      return "1/(2delta+2)";
    case LambdaRule::three_delta_plus_three:
      return "1/(3delta+3)";
    case LambdaRule::two_delta_plus_three:
      return "1/(2delta+3)";
  }
  return "unknown";
}

std::vector<RateRow> rate_table(const std::vector<double>& deltas) {
  const Matrix rotation = rotation_matrix();
  std::vector<RateRow> rows;
  rows.reserve(deltas.size() * kLambdaRules.size());
  for (double delta : deltas) {
    for (LambdaRule rule : kLambdaRules) {
      const double lambda = lambda_for_rule(rule, delta);
      rows.push_back({delta, rule, lambda, spectral_radius(build_matrix(rotation, lambda, delta))});
    }
  }
  return rows;
}

const std::vector<double>& reference_table_deltas() {
  static const std::vector<double> deltas = {
      0.0,    0.0020, 0.0121, 0.0141, 0.0162, 0.0303, 0.0323, 0.0343, 0.0364, 0.0404, 0.0525,
      0.0545, 0.0566, 0.0586, 0.0606, 0.0626, 0.0667, 0.0687, 0.0808, 0.0909, 0.0929, 0.0949};
  return deltas;
}

}  // namespace gfrb
