#include "ftlab/schedule/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ftlab/errors.hpp"
#include "ftlab/harness/metrics.hpp"
#include "ftlab/numerics/ops.hpp"
#include "ftlab/optim/lr_schedule.hpp"
#include "ftlab/telemetry/aggregate.hpp"
#include "ftlab/telemetry/delta.hpp"

namespace ftlab {

void TrainOptions::validate() const {
  hyper.validate();
  clip.validate();
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0)) throw InvalidArgument("warmup_fraction must be in [0,1]");
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t segment_shuffle_seed(std::uint64_t run_seed, int lowest_layer) noexcept {
  return mix_seed(run_seed, 0x5348554646ULL + static_cast<std::uint64_t>(lowest_layer));
}

namespace {

TokenBatch make_batch(const Dataset& data, std::span<const std::size_t> order, std::vector<std::size_t>& labels) {
  TokenBatch batch;
  batch.batch = order.size();
  batch.seq_len = data[order[0]].tokens.size();
  labels.clear();
  for (std::size_t idx : order) {
    const Example& ex = data[idx];
    if (ex.tokens.size() != batch.seq_len) throw ShapeError("examples in a batch must share one sequence length");
    batch.tokens.insert(batch.tokens.end(), ex.tokens.begin(), ex.tokens.end());
    labels.push_back(ex.label);
  }
  return batch;
}

}  // namespace

SegmentStats train_segment(Model& model, AdamWState& state, const ComponentSet& trainable, const Dataset& train,
                           const TrainOptions& options, const TrainSegment& segment, RunContext& ctx,
                           std::int64_t& global_step) {
  options.validate();
  if (segment.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  SegmentStats stats;
  if (segment.epochs == 0) return stats;
  if (train.empty()) throw InvalidArgument("empty training set");
  if (trainable.empty()) throw InvalidArgument("no trainable components");

  const auto bs = static_cast<std::size_t>(options.batch_size);
  const std::size_t per_epoch = (train.size() + bs - 1) / bs;
  const auto total = static_cast<std::int64_t>(per_epoch) * segment.epochs;
  const auto warmup = static_cast<std::int64_t>(std::floor(options.warmup_fraction * static_cast<double>(total)));

  std::mt19937_64 rng(segment.shuffle_seed);
  std::vector<std::size_t> order(train.size());
  std::vector<std::size_t> labels;
  std::int64_t local = 0;

  for (int epoch = 0; epoch < segment.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t n = std::min(bs, order.size() - start);
      const TokenBatch batch = make_batch(train, std::span(order).subspan(start, n), labels);

      Graph g;
      ParamBinder bind(g, model, trainable);
      const NodeId logits = classify(bind, encode(bind, batch), batch.seq_len);
      const NodeId loss = ops::cross_entropy(g, logits, labels);
      model.clear_grads();
      g.backward(loss);

      GradMap grads;
      for (const auto& id : trainable) {
        Tensor& p = model.param(id);
        const auto gd = p.grad();
        grads.emplace(id, Tensor(p.shape(), std::vector<double>(gd.begin(), gd.end())));
      }
      model.clear_grads();
      ClipResult clipped = clip_gradients(std::move(grads), options.clip);

      AdamWHyper hyper = options.hyper;
      hyper.lr = lr_at(local, total, warmup, options.hyper.lr);
      adamw_step(state, model.params(), clipped.grads, hyper);

      stats.last_loss = g.value(loss).item();
      if (ctx.sink != nullptr && ctx.sink->wants_step(global_step)) {
        StepRecord rec;
        rec.run_id = ctx.run_id;
        rec.iteration = segment.iteration;
        rec.step = global_step;
        rec.loss = stats.last_loss;
        rec.lr = hyper.lr;
        rec.norms.reserve(clipped.report.size());
        for (const auto& [id, r] : clipped.report) rec.norms.push_back(ComponentNorm{id, r.pre_norm, r.post_norm});
        ctx.sink->add_step(std::move(rec));
      }
      if (ctx.on_step) ctx.on_step(model, global_step);
      ++global_step;
      ++local;
    }
  }
  stats.steps = local;
  return stats;
}

std::vector<std::size_t> predict(const Model& model, const Dataset& data, int batch_size) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  std::vector<std::size_t> preds;
  preds.reserve(data.size());
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> labels;
  const auto bs = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < data.size(); start += bs) {
    const std::size_t n = std::min(bs, data.size() - start);
    const Tensor logits = forward_classify(model, make_batch(data, std::span(order).subspan(start, n), labels));
    const std::size_t c = logits.cols();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < c; ++j)
        if (logits.at(i, j) > logits.at(i, best)) best = j;
      preds.push_back(best);
    }
  }
  return preds;
}

namespace {

std::vector<std::size_t> labels_of(const Dataset& data) {
  std::vector<std::size_t> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back(ex.label);
  return out;
}

}  // namespace

double evaluate(const Model& model, const TaskData& task) {
  if (task.validation.empty()) throw InvalidArgument("empty validation set");
  return harness::evaluate_metric(task.metric, predict(model, task.validation), labels_of(task.validation));
}

MajorityBaseline majority_baseline(const TaskData& task) {
  if (task.train.empty() || task.validation.empty()) throw InvalidArgument("majority baseline needs both splits");
  std::vector<std::size_t> counts(task.num_classes, 0);
  for (const auto& ex : task.train) {
    if (ex.label >= counts.size()) throw InvalidArgument("label out of range for task '" + task.name + "'");
    ++counts[ex.label];
  }
  const auto majority = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const std::vector<std::size_t> constant(task.validation.size(), majority);
  return MajorityBaseline{task.metric, harness::evaluate_metric(task.metric, constant, labels_of(task.validation))};
}

RunResult run_full_finetune(Model& model, const Snapshot& pretrained, const TaskData& task, int epochs,
                            const TrainOptions& options, RunContext& ctx) {
  AdamWState state;
  std::int64_t global_step = 0;
  const TrainSegment segment{epochs, segment_shuffle_seed(ctx.seed, 1), -1};
  train_segment(model, state, model.component_ids(), task.train, options, segment, ctx, global_step);

  RunResult result;
  result.run_id = ctx.run_id;
  result.approach = ctx.approach;
  result.task = task.name;
  result.seed = ctx.seed;
  result.metric = task.metric;
  result.value = evaluate(model, task);
  const MajorityBaseline base = majority_baseline(task);
  result.majority_baseline = base.value;
  result.failed = classify_run(result.value, task.metric, base) == RunOutcome::Failed;

  if (ctx.sink != nullptr && ctx.sink->wants_deltas())
    ctx.sink->add_delta(DeltaRecord{ctx.run_id, -1, DeltaReference::Pretrained, all_layer_deltas(model, pretrained)});
  return result;
}

}  // namespace ftlab
