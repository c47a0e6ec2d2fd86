#pragma once

#include <optional>
#include <set>
#include <vector>

#include "ftlab/schedule/trainer.hpp"

namespace ftlab {

struct GUConfig {
  int epochs_per_iteration = 3;
  // Number of iterations T_max, 1 <= T_max <= L; unset means L.
  std::optional<int> max_iterations;
  // Restart variant: every iteration starts the trainable set from the
  // pretrained weights with fresh optimizer state.
  bool restart = false;
  bool include_head_always = true;
  // Embeddings join the trainable set together with layer 1.
  bool include_embed_at_last = true;

  int iterations(int num_layers) const;
  void validate(int num_layers) const;
};

// Layers tuned in iteration k (0-based): {L-k, ..., L}.
std::set<int> gu_layers(int num_layers, int k);

// Components tuned in iteration k: the layers above plus head/embed per config.
ComponentSet gu_trainable_set(const Model& model, const GUConfig& config, int k);

struct IterationResult {
  int iteration = 0;
  ComponentSet trainable;
  double value = 0.0;
  bool failed = false;
  std::int64_t steps = 0;
};

// Top-down gradual unfreezing. For each iteration k: optionally restore the
// trainable set from `pretrained` and reset optimizer state (restart), train
// `epochs_per_iteration` epochs on R^(k) only, evaluate, then record layer
// deltas against `pretrained` and against the previous iteration's weights.
// Without restart, newly unfrozen components join with zero moments while
// earlier ones keep theirs. The learning-rate schedule restarts every
// iteration.
std::vector<IterationResult> run_gradual_unfreezing(Model& model, const Snapshot& pretrained, const TaskData& task,
                                                    const GUConfig& config, const TrainOptions& options,
                                                    RunContext& ctx);

}  // namespace ftlab
