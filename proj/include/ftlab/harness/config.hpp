#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftlab/harness/dataset.hpp"
#include "ftlab/model/pretrain.hpp"
#include "ftlab/optim/clip.hpp"
#include "ftlab/telemetry/records.hpp"

namespace ftlab::harness {

enum class ScheduleKind { Full, GradualUnfreezing, GradualUnfreezingRestart };

std::string_view schedule_name(ScheduleKind kind) noexcept;

// One row of the benchmark table: optimizer, clipping policy and regime.
struct ApproachSpec {
  std::string name;
  ClipPolicy clip;
  AdamWHyper hyper;
  ScheduleKind schedule = ScheduleKind::Full;
  // Total epochs for full fine-tuning; epochs per iteration for GU schedules.
  int epochs = 5;
  int batch_size = 16;
  double warmup_fraction = 0.1;
};

struct BenchmarkSettings {
  int num_seeds = 25;
  std::uint64_t base_seed = 0;
};

struct GuSettings {
  int num_seeds = 5;
  int epochs_per_iteration = 3;
  std::optional<int> max_iterations;
  bool include_head_always = true;
  bool include_embed_at_last = true;
  // Empty: first task / first approach.
  std::string task;
  std::string approach;
};

struct SweepSettings {
  std::vector<double> thresholds{0.01, 0.05, 0.1, 0.5, 1.0, 5.0};
  // Empty: first mcc task (else first task) / approach named "cwgnc" (else first).
  std::string task;
  std::string approach;
};

struct ExperimentConfig {
  ModelConfig model;
  PretrainConfig pretrain;
  std::vector<TaskSpec> tasks;
  std::vector<ApproachSpec> approaches;
  TelemetryOptions telemetry;
  BenchmarkSettings benchmark;
  GuSettings gu;
  SweepSettings sweep;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;

  const TaskSpec& task(const std::string& name) const;
  const ApproachSpec& approach(const std::string& name) const;
  const TaskSpec& gu_task() const;
  const ApproachSpec& gu_approach() const;
  const TaskSpec& sweep_task() const;
  const ApproachSpec& sweep_approach() const;
};

// Three toy tasks (balanced/accuracy, imbalanced/f1, noisy imbalanced/mcc)
// and the four benchmark rows: vanilla (no bias correction), bias_correction,
// small_lr_long (lr/10, 4x epochs) and cwgnc (component-wise tau = 0.05).
ExperimentConfig default_config();

// Sections: model, pretrain, tasks, approaches, telemetry, benchmark, gu,
// sweep. Missing sections and fields keep their defaults; a present "tasks"
// or "approaches" array replaces the default list. Unknown keys are errors.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace ftlab::harness
