#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ftlab/model/component.hpp"

namespace ftlab {

enum class Metric { Accuracy, F1, Mcc };

std::string_view metric_name(Metric m) noexcept;
// Accepts "accuracy", "f1", "mcc"; throws InvalidArgument otherwise.
Metric parse_metric(std::string_view name);

struct ComponentNorm {
  ComponentId component;
  double pre_norm = 0.0;
  double post_norm = 0.0;
};

// One optimizer step of one run. iteration is -1 for full fine-tuning.
struct StepRecord {
  std::string run_id;
  int iteration = -1;
  std::int64_t step = 0;
  std::vector<ComponentNorm> norms;
  double loss = 0.0;
  double lr = 0.0;
};

enum class DeltaReference { Pretrained, PreviousIteration };

std::string_view reference_name(DeltaReference r) noexcept;
DeltaReference parse_reference(std::string_view name);

struct ComponentDelta {
  ComponentId component;
  double rmsd = 0.0;
  double cosine = 1.0;
};

// Per-layer summary: max RMSD and min cosine similarity over the layer's
// components, with the per-component values kept alongside.
struct LayerDelta {
  std::string layer;
  double max_rmsd = 0.0;
  double min_cosine = 1.0;
  std::vector<ComponentDelta> components;
};

struct DeltaRecord {
  std::string run_id;
  int iteration = -1;
  DeltaReference reference = DeltaReference::Pretrained;
  std::vector<LayerDelta> layers;
};

// Value of the constant majority-label predictor on a validation split.
struct MajorityBaseline {
  Metric metric = Metric::Accuracy;
  double value = 0.0;
};

struct RunResult {
  std::string run_id;
  std::string approach;
  std::string task;
  std::uint64_t seed = 0;
  Metric metric = Metric::Accuracy;
  double value = 0.0;
  bool failed = false;
  double majority_baseline = 0.0;
};

struct Aggregate {
  std::size_t n = 0;
  double std = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double failed_fraction = 0.0;
};

struct AggregateCell {
  std::string approach;
  std::string task;
  Metric metric = Metric::Accuracy;
  Aggregate aggregate;
};

struct TelemetryOptions {
  bool record_steps = true;
  // Keep every n-th optimizer step.
  int step_stride = 1;
  bool record_deltas = true;
};

// Collects the records of one run (or of a merged set of runs).
class TelemetrySink {
 public:
  explicit TelemetrySink(TelemetryOptions options = {});

  const TelemetryOptions& options() const noexcept { return options_; }
  bool wants_step(std::int64_t step) const noexcept;
  bool wants_deltas() const noexcept { return options_.record_deltas; }

  void add_step(StepRecord record);
  void add_delta(DeltaRecord record);

  const std::vector<StepRecord>& steps() const noexcept { return steps_; }
  const std::vector<DeltaRecord>& deltas() const noexcept { return deltas_; }

  // Appends `other` and re-sorts by run id; records of one run keep their
  // insertion order, so the result does not depend on merge order.
  void merge(TelemetrySink&& other);

 private:
  TelemetryOptions options_;
  std::vector<StepRecord> steps_;
  std::vector<DeltaRecord> deltas_;
};

}  // namespace ftlab
