#pragma once

// Adaptive increasing step-size rule for forward-reflected-backward type
// methods. No Lipschitz constant is needed: each step compares the observed
// ratio ||B x_{k-1} - B x_k|| / ||x_{k-1} - x_k|| against c2 / lambda_{k-1}.
//
//   lambda_k = c1 * dx / dB              if dB > (c2 / lambda_{k-1}) * dx
//            = (1 + gamma) * lambda_{k-1} otherwise
//
// gamma values are consumed in order, one per update, starting with
// term(1) at the first update.

#include <cstdint>
#include <string>

namespace gfrb {

/// Nonnegative summable sequence gamma_1, gamma_2, ...
struct GammaSpec {
  enum class Kind { geometric, inverse_square, zero };

  Kind kind = Kind::geometric;
  double ratio = 0.5;  // geometric only, in (0, 1)
  double scale = 1.0;  // g0 > 0

  /// gamma_j for j >= 1: scale * ratio^j, scale / j^2, or 0.
  double term(std::int64_t j) const;
  void validate() const;

  static GammaSpec geometric(double ratio = 0.5, double scale = 1.0) {
    return {Kind::geometric, ratio, scale};
  }
  static GammaSpec inverse_square(double scale = 1.0) { return {Kind::inverse_square, 0.5, scale}; }
  static GammaSpec zero() { return {Kind::zero, 0.5, 1.0}; }
};

std::string to_string(GammaSpec::Kind kind);
GammaSpec::Kind gamma_kind_from_string(const std::string& name);

struct StepSizeParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double epsilon = 1e-4;
  double lambda0 = 0.1;
  double lambda_minus1 = 0.1;
  GammaSpec gamma;

  /// epsilon = 1e-4, c2 = 0.99 (1 - eps) / (2|delta| + 2), c1 = 0.9 c2.
  static StepSizeParams defaults_for(double delta, double lambda0 = 0.1);

  /// Upper bound (1 - epsilon) / (2|delta| + 2) that c2 must stay below.
  double c2_bound(double delta) const;

  /// Throws ParameterError naming the offending field unless
  /// 0 < c1 < c2 < (1 - eps) / (2|delta| + 2), lambdas > 0 and gamma is valid.
  void validate(double delta) const;
};

/// Per-solve step-size engine. One owner; not shared across threads.
class StepSizeState {
public:
  StepSizeState(const StepSizeParams& params, double delta);

  /// Consumes (||x_{k-1} - x_k||, ||B x_{k-1} - B x_k||), returns lambda_k
  /// and shifts lambda_k into lambda_{k-1}.
  double next_step(double dx, double dB);

  double lambda_prev() const { return lambda_prev_; }
  double lambda_prev2() const { return lambda_prev2_; }
  std::int64_t updates() const { return updates_; }
  /// True if the most recent update took the c1 dx / dB branch.
  bool last_was_contraction() const { return last_contraction_; }
  const StepSizeParams& params() const { return params_; }

private:
  StepSizeParams params_;
  double lambda_prev_;
  double lambda_prev2_;
  std::int64_t updates_ = 0;
  bool last_contraction_ = false;
};

}  // namespace gfrb
