#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace didchain::trace {

// TracingTimeInSeconds(x) = a * x + b for x events.
struct TraceTimeModel {
  double a = 0.44;  // seconds per event
  double b = 0.32;  // seconds

  // Reference coefficients for a hosted testnet.
  static TraceTimeModel reference() { return {0.44, 0.32}; }
};

struct TraceModelFit {
  TraceTimeModel model;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  std::size_t samples = 0;
};

// Throws Error(BadRequest) for negative x.
double predict_trace_time(const TraceTimeModel& model, double x);

// Ordinary least squares. Throws Error(DegenerateInput) with fewer than two
// samples or when all x are equal.
TraceModelFit fit_trace_model(const std::vector<std::pair<double, double>>& samples);

}  // namespace didchain::trace
