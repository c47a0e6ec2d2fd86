#include "ftlab/telemetry/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftlab/errors.hpp"

namespace ftlab {

RunOutcome classify_run(double value, Metric metric, const MajorityBaseline& baseline) {
  if (metric != baseline.metric)
    throw InvalidArgument("classify_run: value is " + std::string(metric_name(metric)) + " but baseline is " +
                          std::string(metric_name(baseline.metric)));
  return value > baseline.value ? RunOutcome::Success : RunOutcome::Failed;
}

Aggregate aggregate_values(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("aggregate of zero runs");
  Aggregate a;
  a.n = values.size();
  double total = 0.0;
  double lo = values[0], hi = values[0];
  // Welford for the spread, plain summation for the mean.
  double run_mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    total += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++k;
    const double delta = v - run_mean;
    run_mean += delta / static_cast<double>(k);
    m2 += delta * (v - run_mean);
  }
  a.mean = std::clamp(total / static_cast<double>(a.n), lo, hi);
  a.max = hi;
  a.std = a.n > 1 ? std::sqrt(std::max(0.0, m2) / static_cast<double>(a.n - 1)) : 0.0;
  return a;
}

Aggregate aggregate_runs(std::span<const RunResult> results) {
  if (results.empty()) throw InvalidArgument("aggregate of zero runs");
  std::vector<double> values;
  values.reserve(results.size());
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (r.metric != results[0].metric) throw InvalidArgument("aggregate over mixed metrics");
    values.push_back(r.value);
    if (r.failed) ++failed;
  }
  Aggregate a = aggregate_values(values);
  a.failed_fraction = static_cast<double>(failed) / static_cast<double>(results.size());
  return a;
}

}  // namespace ftlab
