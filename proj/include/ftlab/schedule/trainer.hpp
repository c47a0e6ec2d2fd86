#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ftlab/model/snapshot.hpp"
#include "ftlab/optim/clip.hpp"
#include "ftlab/schedule/data.hpp"
#include "ftlab/telemetry/records.hpp"

namespace ftlab {

struct TrainOptions {
  AdamWHyper hyper;
  ClipPolicy clip;
  int batch_size = 16;
  // Warmup steps as a fraction of each training segment.
  double warmup_fraction = 0.1;

  void validate() const;
};

// Identity and sinks of one fine-tuning run.
struct RunContext {
  std::string run_id;
  std::string approach;
  std::string task;
  std::uint64_t seed = 0;
  TelemetrySink* sink = nullptr;
  // Called after every optimizer step with the run-global step index.
  std::function<void(const Model&, std::int64_t step)> on_step;
};

// A stretch of training with its own learning-rate schedule and data order.
struct TrainSegment {
  int epochs = 1;
  std::uint64_t shuffle_seed = 0;
  // Recorded in telemetry; -1 for full fine-tuning.
  int iteration = -1;
};

struct SegmentStats {
  std::int64_t steps = 0;
  double last_loss = 0.0;
};

// Runs `segment.epochs` passes over `train`. Only components in `trainable`
// enter the graph as gradient-tracking leaves, are clipped and updated; every
// other parameter and its optimizer state stay bit-identical. Each step is
// backward -> clip_gradients -> adamw_step, with the learning rate from
// lr_at over the segment's own step count. `global_step` advances by one
// per optimizer step.
SegmentStats train_segment(Model& model, AdamWState& state, const ComponentSet& trainable, const Dataset& train,
                           const TrainOptions& options, const TrainSegment& segment, RunContext& ctx,
                           std::int64_t& global_step);

// Argmax predictions (ties resolve to the lower class index).
std::vector<std::size_t> predict(const Model& model, const Dataset& data, int batch_size = 64);

// Validation metric of the model on the task.
double evaluate(const Model& model, const TaskData& task);

// Metric of the constant predictor that outputs the most frequent training
// label (lowest label on ties), scored on the validation split.
MajorityBaseline majority_baseline(const TaskData& task);

// Data-order seed for a segment whose lowest trainable transformer layer is
// `lowest_layer`. Full fine-tuning and the last gradual-unfreezing iteration
// both start at layer 1 and therefore see the same order.
std::uint64_t segment_shuffle_seed(std::uint64_t run_seed, int lowest_layer) noexcept;

// SplitMix64-style mixing used for every derived seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

// All components trainable for `epochs`, starting from the model's current
// weights (pretrained body plus fresh head). `pretrained` is the reference
// for the final delta record. Records steps with iteration -1.
RunResult run_full_finetune(Model& model, const Snapshot& pretrained, const TaskData& task, int epochs,
                            const TrainOptions& options, RunContext& ctx);

}  // namespace ftlab
