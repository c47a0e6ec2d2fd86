#pragma once

#include <span>

#include "ftlab/telemetry/records.hpp"

namespace ftlab {

enum class RunOutcome { Success, Failed };

// A run fails unless it strictly beats the majority classifier.
RunOutcome classify_run(double value, Metric metric, const MajorityBaseline& baseline);

// Sample standard deviation (n-1; 0 for a single run), mean, max and the
// fraction of failed runs. Throws on empty input or mixed metrics.
Aggregate aggregate_runs(std::span<const RunResult> results);

// Same statistics for plain values; failed_fraction is 0.
Aggregate aggregate_values(std::span<const double> values);

}  // namespace ftlab
