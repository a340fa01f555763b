#pragma once

// Splitting solvers for 0 in (A + B)(x).
//
//   fb            x+ = J(x - l Bx)
//   fbf (Tseng)   y = J(x - l Bx);  x+ = y - l By + l Bx
//   frb           x+ = J(x - l Bx - l (Bx - Bx1))
//   rfb           y = 2x - x1;  x+ = J(x - l By)
//   gfrb_fixed    x+ = J(x - l(d+2) Bx + l(2d+1) Bx1 - l d Bx2)
//   gfrb_adaptive x+ = J(x - l_k Bx - l_{k-1}(1+d)(Bx - Bx1) + l_{k-2} d (Bx1 - Bx2))
//                 with l_k from StepSizeState.
//
// Here J = J_{l A}, x1 and x2 are the two previous iterates. err_k is
// ||x_{k+1} - x_k||; a run stops when err_k <= tol or after max_iter steps.
//
// The fixed-step solvers are templates over the scalar type so the
// closed-form rate trajectories can be checked in extended precision.

#include <chrono>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfrb/operators.hpp"
#include "gfrb/stepsize.hpp"

namespace gfrb {

struct StopRule {
  double tol = 1e-6;
  int max_iter = 10000;

  void validate() const;
};

struct TraceRow {
  int k = 0;
  double err = 0.0;
  double lambda = 0.0;
  double elapsed_seconds = 0.0;
};

struct IterationTrace {
  std::vector<TraceRow> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  const TraceRow& back() const { return rows.back(); }
  /// Mean seconds per iteration, excluding the first (warm-up) iteration.
  double mean_iteration_seconds() const;
};

/// CSV with header `k,err,lambda,elapsed_s`, floats at 17 significant digits.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, bool include_timing = true);

/// Raised when an iterate turns non-finite or err_k exceeds 1e12.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, IterationTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const { return trace_; }

private:
  IterationTrace trace_;
};

template <class T>
struct SolveResult {
  VectorT<T> x;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// Called after every iteration with (k + 1, x_{k+1}).
template <class T>
using IterationObserver = std::function<void(int, const VectorT<T>&)>;

namespace detail {

inline constexpr double kDivergenceThreshold = 1e12;

template <class T>
double to_double(const T& v) {
  return static_cast<double>(v);
}

template <class T>
bool all_finite(const VectorT<T>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(to_double(x[i]))) return false;
  }
  return true;
}

/// Shared bookkeeping: timing, trace rows, divergence guard, stop test.
template <class T>
class RunMonitor {
public:
  RunMonitor(const char* solver, const StopRule& stop, const IterationObserver<T>& observer)
      : solver_(solver), stop_(stop), observer_(observer), start_(std::chrono::steady_clock::now()) {
    stop_.validate();
  }

  /// Records iteration k. Returns true when the run should stop.
  bool record(int k, const VectorT<T>& x_next, const VectorT<T>& x_curr, double lambda) {
    const double err = to_double(VectorT<T>(x_next - x_curr).norm());
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    trace_.rows.push_back({k, err, lambda, elapsed});
    if (!std::isfinite(err) || err > kDivergenceThreshold || !all_finite<T>(x_next)) {
      std::ostringstream msg;
      msg << solver_ << ": diverged at iteration " << k << " (err=" << err << ")";
      throw DivergenceError(msg.str(), trace_);
    }
    if (observer_) observer_(k + 1, x_next);
    if (err <= stop_.tol) {
      converged_ = true;
      return true;
    }
    return k + 1 >= stop_.max_iter;
  }

  SolveResult<T> finish(VectorT<T> x, std::vector<std::string> warnings) {
    SolveResult<T> result;
    result.x = std::move(x);
    result.iterations = static_cast<int>(trace_.rows.size());
    result.trace = std::move(trace_);
    result.converged = converged_;
    result.warnings = std::move(warnings);
    return result;
  }

private:
  const char* solver_;
  StopRule stop_;
  const IterationObserver<T>& observer_;
  std::chrono::steady_clock::time_point start_;
  IterationTrace trace_;
  bool converged_ = false;
};

template <class T>
void check_dimensions(const char* solver, const VectorT<T>& a, const VectorT<T>& b) {
  if (a.size() != b.size())
    throw DimensionError(std::string(solver) + ": initial points have different dimensions");
}

/// Appends a warning when lambda violates a sufficient step-size bound.
inline void warn_step(std::vector<std::string>& warnings, const char* solver, double lambda,
                      const std::optional<double>& lipschitz, double bound_times_l,
                      const char* bound_text) {
  if (!lipschitz || *lipschitz <= 0.0) return;
  const double bound = bound_times_l / *lipschitz;
  if (!(lambda > 0.0 && lambda < bound)) {
    std::ostringstream msg;
    msg << solver << ": lambda=" << lambda << " outside the sufficient range 0 < lambda < "
        << bound_text << " = " << bound;
    warnings.push_back(msg.str());
  }
}

}  // namespace detail

/// Forward-backward. Needs cocoercive B to converge; kept as a baseline.
template <class T>
SolveResult<T> fb(const BasicResolventOperator<T>& resolvent, const BasicForwardOperator<T>& forward,
                  const VectorT<T>& x0, T lambda, const StopRule& stop,
                  const IterationObserver<T>& observer = {}) {
  if (!(lambda > T(0))) throw ParameterError("fb: lambda must be positive");
  detail::RunMonitor<T> monitor("fb", stop, observer);
  VectorT<T> x = x0;
  for (int k = 0;; ++k) {
    VectorT<T> bx = forward(x);
    VectorT<T> x_next = resolvent(VectorT<T>(x - lambda * bx), lambda);
    const bool done = monitor.record(k, x_next, x, detail::to_double(lambda));
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), {});
}

/// Tseng's forward-backward-forward: two B evaluations per iteration.
template <class T>
SolveResult<T> fbf(const BasicResolventOperator<T>& resolvent, const BasicForwardOperator<T>& forward,
                   const VectorT<T>& x0, T lambda, const StopRule& stop,
                   const IterationObserver<T>& observer = {}) {
  if (!(lambda > T(0))) throw ParameterError("fbf: lambda must be positive");
  std::vector<std::string> warnings;
  detail::warn_step(warnings, "fbf", detail::to_double(lambda), forward.lipschitz_hint, 1.0, "1/L");
  detail::RunMonitor<T> monitor("fbf", stop, observer);
  VectorT<T> x = x0;
  for (int k = 0;; ++k) {
    const VectorT<T> bx = forward(x);
    const VectorT<T> y = resolvent(VectorT<T>(x - lambda * bx), lambda);
    const VectorT<T> by = forward(y);
    VectorT<T> x_next = y - lambda * by + lambda * bx;
    const bool done = monitor.record(k, x_next, x, detail::to_double(lambda));
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), std::move(warnings));
}

/// Forward-reflected-backward with constant step.
template <class T>
SolveResult<T> frb(const BasicResolventOperator<T>& resolvent, const BasicForwardOperator<T>& forward,
                   const VectorT<T>& x0, const VectorT<T>& x_minus1, T lambda, const StopRule& stop,
                   const IterationObserver<T>& observer = {}) {
  if (!(lambda > T(0))) throw ParameterError("frb: lambda must be positive");
  detail::check_dimensions<T>("frb", x0, x_minus1);
  std::vector<std::string> warnings;
  detail::warn_step(warnings, "frb", detail::to_double(lambda), forward.lipschitz_hint, 0.5,
                    "1/(2L)");
  detail::RunMonitor<T> monitor("frb", stop, observer);
  VectorT<T> x = x0;
  VectorT<T> bx = forward(x);
  VectorT<T> bx_prev = (x_minus1 == x0) ? bx : VectorT<T>(forward(x_minus1));
  for (int k = 0;; ++k) {
    VectorT<T> v = x - lambda * bx - lambda * (bx - bx_prev);
    VectorT<T> x_next = resolvent(v, lambda);
    const bool done = monitor.record(k, x_next, x, detail::to_double(lambda));
    bx_prev = std::move(bx);
    bx = forward(x_next);
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), std::move(warnings));
}

/// Reflected forward-backward (Cevher-Vu).
template <class T>
SolveResult<T> rfb(const BasicResolventOperator<T>& resolvent, const BasicForwardOperator<T>& forward,
                   const VectorT<T>& x0, const VectorT<T>& x_minus1, T lambda, const StopRule& stop,
                   const IterationObserver<T>& observer = {}) {
  if (!(lambda > T(0))) throw ParameterError("rfb: lambda must be positive");
  detail::check_dimensions<T>("rfb", x0, x_minus1);
  std::vector<std::string> warnings;
  detail::warn_step(warnings, "rfb", detail::to_double(lambda), forward.lipschitz_hint,
                    std::sqrt(2.0) - 1.0, "(sqrt(2)-1)/L");
  detail::RunMonitor<T> monitor("rfb", stop, observer);
  VectorT<T> x = x0;
  VectorT<T> x_prev = x_minus1;
  for (int k = 0;; ++k) {
    const VectorT<T> y = T(2) * x - x_prev;
    VectorT<T> x_next = resolvent(VectorT<T>(x - lambda * forward(y)), lambda);
    const bool done = monitor.record(k, x_next, x, detail::to_double(lambda));
    x_prev = std::move(x);
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), std::move(warnings));
}

/// Generalized forward-reflected-backward with constant step lambda and
/// reflection weight delta. delta = 0 is FRB.
template <class T>
SolveResult<T> gfrb_fixed(const BasicResolventOperator<T>& resolvent,
                          const BasicForwardOperator<T>& forward, const VectorT<T>& x0,
                          const VectorT<T>& x_minus1, const VectorT<T>& x_minus2, T lambda, T delta,
                          const StopRule& stop, const IterationObserver<T>& observer = {}) {
  if (!(lambda > T(0))) throw ParameterError("gfrb_fixed: lambda must be positive");
  detail::check_dimensions<T>("gfrb_fixed", x0, x_minus1);
  detail::check_dimensions<T>("gfrb_fixed", x0, x_minus2);
  std::vector<std::string> warnings;
  const double abs_delta = std::abs(detail::to_double(delta));
  detail::warn_step(warnings, "gfrb_fixed", detail::to_double(lambda), forward.lipschitz_hint,
                    1.0 / (2.0 * (1.0 + abs_delta)), "1/(2L(1+|delta|))");

  const T c_curr = lambda * (delta + T(2));
  const T c_prev = lambda * (T(2) * delta + T(1));
  const T c_prev2 = lambda * delta;

  detail::RunMonitor<T> monitor("gfrb_fixed", stop, observer);
  VectorT<T> x = x0;
  VectorT<T> bx = forward(x);
  VectorT<T> bx_prev = (x_minus1 == x0) ? bx : VectorT<T>(forward(x_minus1));
  VectorT<T> bx_prev2 = (x_minus2 == x_minus1) ? bx_prev
                        : (x_minus2 == x0)     ? bx
                                               : VectorT<T>(forward(x_minus2));
  for (int k = 0;; ++k) {
    VectorT<T> v = x - c_curr * bx + c_prev * bx_prev - c_prev2 * bx_prev2;
    VectorT<T> x_next = resolvent(v, lambda);
    const bool done = monitor.record(k, x_next, x, detail::to_double(lambda));
    bx_prev2 = std::move(bx_prev);
    bx_prev = std::move(bx);
    bx = forward(x_next);
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), std::move(warnings));
}

/// Convenience overload: x_{-2} = x_{-1}.
template <class T>
SolveResult<T> gfrb_fixed(const BasicResolventOperator<T>& resolvent,
                          const BasicForwardOperator<T>& forward, const VectorT<T>& x0,
                          const VectorT<T>& x_minus1, T lambda, T delta, const StopRule& stop,
                          const IterationObserver<T>& observer = {}) {
  return gfrb_fixed<T>(resolvent, forward, x0, x_minus1, x_minus1, lambda, delta, stop, observer);
}

/// GFRB with the adaptive increasing step-size. Only x_0 and x_{-1} are
/// needed: at the first update both history slots hold x_{-1}, and the
/// lambda history starts at (lambda0, lambda_minus1).
SolveResult<double> gfrb_adaptive(const ResolventOperator& resolvent, const ForwardOperator& forward,
                                  const Vector& x0, const Vector& x_minus1, double delta,
                                  const StepSizeParams& params, const StopRule& stop,
                                  const IterationObserver<double>& observer = {});

}  // namespace gfrb
