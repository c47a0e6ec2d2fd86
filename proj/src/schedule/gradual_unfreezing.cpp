#include "ftlab/schedule/gradual_unfreezing.hpp"

#include <string>

#include "ftlab/errors.hpp"
#include "ftlab/telemetry/aggregate.hpp"
#include "ftlab/telemetry/delta.hpp"

namespace ftlab {

int GUConfig::iterations(int num_layers) const { return max_iterations.value_or(num_layers); }

void GUConfig::validate(int num_layers) const {
  if (epochs_per_iteration < 1) throw InvalidArgument("epochs_per_iteration must be >= 1");
  const int t = iterations(num_layers);
  if (t < 1 || t > num_layers)
    throw InvalidArgument("max_iterations must satisfy 1 <= T <= L (L=" + std::to_string(num_layers) + ", T=" +
                          std::to_string(t) + ")");
}

std::set<int> gu_layers(int num_layers, int k) {
  if (num_layers < 1 || k < 0 || k >= num_layers)
    throw InvalidArgument("gu_layers: iteration " + std::to_string(k) + " outside [0," + std::to_string(num_layers) +
                          ")");
  std::set<int> out;
  for (int i = num_layers - k; i <= num_layers; ++i) out.insert(i);
  return out;
}

ComponentSet gu_trainable_set(const Model& model, const GUConfig& config, int k) {
  const int L = model.config().num_layers;
  ComponentSet out;
  for (int layer : gu_layers(L, k)) out.merge(model.components_of_layer(layer));
  if (config.include_head_always) out.merge(model.components_in_scope(Scope::Head));
  if (config.include_embed_at_last && k == L - 1) out.merge(model.components_in_scope(Scope::Embed));
  return out;
}

std::vector<IterationResult> run_gradual_unfreezing(Model& model, const Snapshot& pretrained, const TaskData& task,
                                                    const GUConfig& config, const TrainOptions& options,
                                                    RunContext& ctx) {
  const int L = model.config().num_layers;
  config.validate(L);
  const MajorityBaseline base = majority_baseline(task);

  AdamWState state;
  std::int64_t global_step = 0;
  Snapshot previous = snapshot(model, "iteration-start");
  std::vector<IterationResult> results;

  for (int k = 0; k < config.iterations(L); ++k) {
    IterationResult it;
    it.iteration = k;
    it.trainable = gu_trainable_set(model, config, k);
    if (config.restart) {
      restore(model, pretrained, LayerSelector::components(it.trainable));
      state.reset();
    }

    const TrainSegment segment{config.epochs_per_iteration, segment_shuffle_seed(ctx.seed, L - k), k};
    it.steps = train_segment(model, state, it.trainable, task.train, options, segment, ctx, global_step).steps;
    it.value = evaluate(model, task);
    it.failed = classify_run(it.value, task.metric, base) == RunOutcome::Failed;

    if (ctx.sink != nullptr && ctx.sink->wants_deltas()) {
      ctx.sink->add_delta(DeltaRecord{ctx.run_id, k, DeltaReference::Pretrained, all_layer_deltas(model, pretrained)});
      ctx.sink->add_delta(
          DeltaRecord{ctx.run_id, k, DeltaReference::PreviousIteration, all_layer_deltas(model, previous)});
    }
    previous = snapshot(model, "iteration-" + std::to_string(k));
    results.push_back(std::move(it));
  }
  return results;
}

}  // namespace ftlab
