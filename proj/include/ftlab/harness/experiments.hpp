#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftlab/harness/config.hpp"
#include "ftlab/schedule/gradual_unfreezing.hpp"

namespace ftlab::harness {

// A run that stopped on a non-finite value or another error.
struct RunError {
  std::string run_id;
  std::string message;
  bool numeric = false;
};

struct ExperimentOutput {
  std::vector<RunResult> runs;
  std::vector<AggregateCell> cells;
  TelemetrySink telemetry;
  std::vector<RunError> errors;

  bool ok() const noexcept { return errors.empty(); }
};

struct ExecOptions {
  // Runs executed concurrently; results do not depend on this.
  int workers = 1;
};

// Stable 64-bit FNV-1a hash of a name, used in seed derivation.
std::uint64_t name_hash(std::string_view name) noexcept;

// Seed of run `index` on `task`. The approach does not enter, so every
// approach sees the same head init and data order for a given index.
std::uint64_t run_seed(std::uint64_t base_seed, std::string_view task, int index) noexcept;

// "approach/task/007".
std::string make_run_id(std::string_view approach, std::string_view task, int index);

TrainOptions train_options(const ApproachSpec& approach);

// Fresh model at the pretrained weights with a head drawn from `seed`.
Model prepare_model(const ModelConfig& config, const Snapshot& pretrained, std::uint64_t seed);

// One run of `approach` on `task`. GU schedules report the last iteration.
RunResult run_single(const ExperimentConfig& config, const Snapshot& pretrained, const ApproachSpec& approach,
                     const TaskData& task, int index, TelemetrySink& sink);

// Every approach on every task for benchmark.num_seeds runs.
ExperimentOutput run_benchmark(const ExperimentConfig& config, const Snapshot& pretrained, const ExecOptions& exec = {});

// The sweep approach with its clip policy replaced by component_wise(tau)
// for each threshold, on the sweep task. Rows are named "tau=<value>".
ExperimentOutput run_threshold_sweep(const ExperimentConfig& config, const Snapshot& pretrained,
                                     const ExecOptions& exec = {});

std::string sweep_row_name(double tau);

struct TrajectoryPoint {
  std::string method;
  int iteration = 0;
  Aggregate aggregate;
};

struct GuOutput {
  // Final-iteration results per method and seed ("gu", "gu_restart", "full").
  ExperimentOutput experiment;
  // Per-iteration aggregates; "full" has one point at the last iteration.
  std::vector<TrajectoryPoint> trajectory;
};

// GU, GU-restart and full fine-tuning (epochs = epochs_per_iteration) on the
// GU task with the GU approach's optimizer and clip policy.
GuOutput run_gu_experiment(const ExperimentConfig& config, const Snapshot& pretrained, const ExecOptions& exec = {});

}  // namespace ftlab::harness
