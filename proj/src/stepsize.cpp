#include "gfrb/stepsize.hpp"

#include <cmath>
#include <sstream>

#include "gfrb/errors.hpp"

namespace gfrb {

double GammaSpec::term(std::int64_t j) const {
  switch (kind) {
    case Kind::geometric:
      return scale * std::pow(ratio, static_cast<double>(j));
    case Kind::inverse_square: {
      const double jj = static_cast<double>(j);
      return scale / (jj * jj);
    }
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

void GammaSpec::validate() const {
  if (kind == Kind::zero) return;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("gamma.scale must be positive");
  if (kind == Kind::geometric && !(ratio > 0.0 && ratio < 1.0))
    throw ParameterError("gamma.ratio must lie in (0, 1)");
}

std::string to_string(GammaSpec::Kind kind) {
  switch (kind) {
    case GammaSpec::Kind::geometric:
      return "geometric";
    case GammaSpec::Kind::inverse_square:
      return "inverse_square";
    case GammaSpec::Kind::zero:
      return "zero";
  }
  return "unknown";
}

GammaSpec::Kind gamma_kind_from_string(const std::string& name) {
  if (name == "geometric") return GammaSpec::Kind::geometric;
  if (name == "inverse_square") return GammaSpec::Kind::inverse_square;
  if (name == "zero") return GammaSpec::Kind::zero;
  throw ParameterError("gamma.kind: unknown sequence '" + name + "'");
}

StepSizeParams StepSizeParams::defaults_for(double delta, double lambda0) {
  StepSizeParams p;
  p.epsilon = 1e-4;
  p.c2 = 0.99 * p.c2_bound(delta);
  p.c1 = 0.9 * p.c2;
  p.lambda0 = lambda0;
  p.lambda_minus1 = lambda0;
  p.gamma = GammaSpec::geometric();
  return p;
}

double StepSizeParams::c2_bound(double delta) const {
  return (1.0 - epsilon) / (2.0 * std::abs(delta) + 2.0);
}

void StepSizeParams::validate(double delta) const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(c1 > 0.0)) throw ParameterError("c1 must be positive");
  if (!(c1 < c2)) {
    std::ostringstream msg;
    msg << "c1 must be strictly less than c2 (c1=" << c1 << ", c2=" << c2 << ")";
    throw ParameterError(msg.str());
  }
  const double bound = c2_bound(delta);
  if (!(c2 < bound)) {
    std::ostringstream msg;
    msg << "c2 must be strictly less than (1 - epsilon)/(2|delta| + 2) = " << bound
        << " (c2=" << c2 << ")";
    throw ParameterError(msg.str());
  }
  if (!(lambda0 > 0.0)) throw ParameterError("lambda0 must be positive");
  if (!(lambda_minus1 > 0.0)) throw ParameterError("lambda_minus1 must be positive");
  gamma.validate();
}

StepSizeState::StepSizeState(const StepSizeParams& params, double delta)
    : params_(params), lambda_prev_(params.lambda0), lambda_prev2_(params.lambda_minus1) {
  params_.validate(delta);
}

double StepSizeState::next_step(double dx, double dB) {
  if (!(dx >= 0.0) || !(dB >= 0.0) || !std::isfinite(dx) || !std::isfinite(dB))
    throw ParameterError("next_step: distances must be finite and nonnegative");
  if (dx == 0.0 && dB > 0.0)
    throw InconsistentOperatorError("next_step: B changed between identical points");

  ++updates_;
  double lambda;
  // Strict inequality: a tie takes the growth branch.
  if (dB > (params_.c2 / lambda_prev_) * dx) {
    lambda = params_.c1 * dx / dB;
    last_contraction_ = true;
  } else {
    lambda = (1.0 + params_.gamma.term(updates_)) * lambda_prev_;
    last_contraction_ = false;
  }
  lambda_prev2_ = lambda_prev_;
  lambda_prev_ = lambda;
  return lambda;
}

}  // namespace gfrb
