#include "gfrb/splitting.hpp"

#include <iomanip>
#include <ostream>

namespace gfrb {

void StopRule::validate() const {
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ParameterError("stop.tol must be finite and >= 0");
  if (max_iter < 1) throw ParameterError("stop.max_iter must be >= 1");
}

double IterationTrace::mean_iteration_seconds() const {
  if (rows.size() < 2) return 0.0;
  const double span = rows.back().elapsed_seconds - rows.front().elapsed_seconds;
  return span / static_cast<double>(rows.size() - 1);
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, bool include_timing) {
  const auto old_precision = out.precision(17);
  out << "k,err,lambda,elapsed_s\n";
  for (const auto& row : trace.rows) {
    out << row.k << ',' << row.err << ',' << row.lambda << ','
        << (include_timing ? row.elapsed_seconds : 0.0) << '\n';
  }
  out.precision(old_precision);
}

SolveResult<double> gfrb_adaptive(const ResolventOperator& resolvent, const ForwardOperator& forward,
                                  const Vector& x0, const Vector& x_minus1, double delta,
                                  const StepSizeParams& params, const StopRule& stop,
                                  const IterationObserver<double>& observer) {
  detail::check_dimensions<double>("gfrb_adaptive", x0, x_minus1);
  StepSizeState steps(params, delta);
  detail::RunMonitor<double> monitor("gfrb_adaptive", stop, observer);

  Vector x = x0;
  Vector x_prev = x_minus1;
  Vector bx = forward(x);
  Vector bx_prev = (x_minus1 == x0) ? bx : Vector(forward(x_minus1));
  Vector bx_prev2 = bx_prev;

  for (int k = 0;; ++k) {
    const double lambda_prev = steps.lambda_prev();
    const double lambda_prev2 = steps.lambda_prev2();
    const double lambda = steps.next_step((x_prev - x).norm(), (bx_prev - bx).norm());

    Vector v = x - lambda * bx - lambda_prev * (1.0 + delta) * (bx - bx_prev) +
               lambda_prev2 * delta * (bx_prev - bx_prev2);
    Vector x_next = resolvent(v, lambda);
    const bool done = monitor.record(k, x_next, x, lambda);

    bx_prev2 = std::move(bx_prev);
    bx_prev = std::move(bx);
    bx = forward(x_next);
    x_prev = std::move(x);
    x = std::move(x_next);
    if (done) break;
  }
  return monitor.finish(std::move(x), {});
}

}  // namespace gfrb
