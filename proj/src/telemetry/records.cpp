#include "ftlab/telemetry/records.hpp"

#include <algorithm>

#include "ftlab/errors.hpp"

namespace ftlab {

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::F1: return "f1";
    case Metric::Mcc: return "mcc";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "accuracy") return Metric::Accuracy;
  if (name == "f1") return Metric::F1;
  if (name == "mcc") return Metric::Mcc;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected accuracy, f1 or mcc)");
}

std::string_view reference_name(DeltaReference r) noexcept {
  return r == DeltaReference::Pretrained ? "pretrained" : "previous_iteration";
}

DeltaReference parse_reference(std::string_view name) {
  if (name == "pretrained") return DeltaReference::Pretrained;
  if (name == "previous_iteration") return DeltaReference::PreviousIteration;
  throw InvalidArgument("unknown delta reference '" + std::string(name) + "'");
}

TelemetrySink::TelemetrySink(TelemetryOptions options) : options_(options) {
  if (options_.step_stride < 1) throw InvalidArgument("telemetry step_stride must be >= 1");
}

bool TelemetrySink::wants_step(std::int64_t step) const noexcept {
  return options_.record_steps && step % options_.step_stride == 0;
}

void TelemetrySink::add_step(StepRecord record) {
  if (!steps_.empty() && steps_.back().run_id == record.run_id && steps_.back().step >= record.step)
    throw InvalidArgument("step records must be strictly increasing within run '" + record.run_id + "'");
  steps_.push_back(std::move(record));
}

void TelemetrySink::add_delta(DeltaRecord record) { deltas_.push_back(std::move(record)); }

void TelemetrySink::merge(TelemetrySink&& other) {
  std::move(other.steps_.begin(), other.steps_.end(), std::back_inserter(steps_));
  std::move(other.deltas_.begin(), other.deltas_.end(), std::back_inserter(deltas_));
  other.steps_.clear();
  other.deltas_.clear();
  std::stable_sort(steps_.begin(), steps_.end(),
                   [](const StepRecord& a, const StepRecord& b) { return a.run_id < b.run_id; });
  std::stable_sort(deltas_.begin(), deltas_.end(),
                   [](const DeltaRecord& a, const DeltaRecord& b) { return a.run_id < b.run_id; });
}

}  // namespace ftlab
