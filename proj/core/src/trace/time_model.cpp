#include "didchain/trace/time_model.hpp"

#include "didchain/common/error.hpp"

#include <cmath>

namespace didchain::trace {

double predict_trace_time(const TraceTimeModel& model, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::BadRequest, "event count must be non-negative");
  return model.a * x + model.b;
}

TraceModelFit fit_trace_model(const std::vector<std::pair<double, double>>& samples) {
  const auto n = samples.size();
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "need at least two samples");
  double mx = 0, my = 0;
  for (const auto& [x, y] : samples) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : samples) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateInput, "all samples share one x value");

  TraceModelFit fit;
  fit.samples = n;
  fit.model.a = sxy / sxx;
  fit.model.b = my - fit.model.a * mx;
  double sse = 0;
  for (const auto& [x, y] : samples) {
    auto r = y - (fit.model.a * x + fit.model.b);
    sse += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
  if (n > 2) {
    auto s2 = sse / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return fit;
}

}  // namespace didchain::trace
