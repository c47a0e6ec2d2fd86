#include "ftlab/model/pretrain.hpp"

#include <random>

#include "ftlab/errors.hpp"
#include "ftlab/numerics/ops.hpp"
#include "ftlab/optim/adamw.hpp"
#include "ftlab/optim/lr_schedule.hpp"

namespace ftlab {

namespace {

struct MaskedBatch {
  TokenBatch input;
  std::vector<std::size_t> masked_rows;
  std::vector<std::size_t> targets;
};

MaskedBatch sample_masked_batch(const ModelConfig& cfg, int batch_size, double mask_prob, std::mt19937_64& rng) {
  const auto S = static_cast<std::size_t>(cfg.max_seq_len);
  const auto span = static_cast<std::size_t>(cfg.vocab - 1);
  MaskedBatch mb;
  mb.input.batch = static_cast<std::size_t>(batch_size);
  mb.input.seq_len = S;
  mb.input.tokens.resize(mb.input.batch * S);
  std::uniform_int_distribution<std::size_t> start_dist(0, span - 1);
  std::uniform_int_distribution<std::size_t> stride_dist(1, 3);
  std::uniform_int_distribution<std::size_t> pos_dist(0, S - 1);
  std::bernoulli_distribution mask_dist(mask_prob);
  for (std::size_t b = 0; b < mb.input.batch; ++b) {
    const std::size_t start = start_dist(rng);
    const std::size_t stride = stride_dist(rng);
    bool any = false;
    for (std::size_t j = 0; j < S; ++j) {
      const std::size_t tok = 1 + (start + j * stride) % span;
      const std::size_t row = b * S + j;
      if (mask_dist(rng)) {
        mb.masked_rows.push_back(row);
        mb.targets.push_back(tok);
        mb.input.tokens[row] = kMaskToken;
        any = true;
      } else {
        mb.input.tokens[row] = tok;
      }
    }
    if (!any) {
      const std::size_t j = pos_dist(rng);
      const std::size_t row = b * S + j;
      mb.masked_rows.push_back(row);
      mb.targets.push_back(mb.input.tokens[row]);
      mb.input.tokens[row] = kMaskToken;
    }
  }
  return mb;
}

NodeId masked_loss_node(ParamBinder& bind, const MaskedBatch& mb) {
  Graph& g = bind.graph();
  const NodeId hidden = encode(bind, mb.input);
  const NodeId picked = ops::gather_rows(g, hidden, mb.masked_rows);
  const NodeId logits = ops::matmul(g, picked, ops::transpose(g, bind("embed.token")));
  return ops::cross_entropy(g, logits, mb.targets);
}

}  // namespace

void PretrainConfig::validate() const {
  if (steps < 0) throw InvalidArgument("pretrain steps must be >= 0");
  if (batch_size < 1) throw InvalidArgument("pretrain batch_size must be >= 1");
  if (!(lr > 0.0)) throw InvalidArgument("pretrain lr must be > 0");
  if (!(mask_prob > 0.0 && mask_prob <= 1.0)) throw InvalidArgument("pretrain mask_prob must be in (0,1]");
}

double masked_token_loss(const Model& model, int batch_size, double mask_prob, std::uint64_t seed) {
  if (model.config().vocab < 2) throw InvalidArgument("pretraining needs a vocabulary of at least 2 tokens");
  std::mt19937_64 rng(seed);
  const MaskedBatch mb = sample_masked_batch(model.config(), batch_size, mask_prob, rng);
  Graph g;
  ParamBinder bind(g, model);
  return g.value(masked_loss_node(bind, mb)).item();
}

// Held-out sequences for the before/after loss, independent of the training batch size.
constexpr int kEvalBatch = 64;

PretrainResult pretrain(Model& model, const PretrainConfig& config) {
  config.validate();
  if (model.config().vocab < 2) throw InvalidArgument("pretraining needs a vocabulary of at least 2 tokens");
  const std::uint64_t eval_seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
  const double initial = masked_token_loss(model, kEvalBatch, config.mask_prob, eval_seed);

  ComponentSet trainable = model.component_ids();
  for (const auto& id : model.components_in_scope(Scope::Head)) trainable.erase(id);

  AdamWHyper hyper;
  hyper.lr = config.lr;
  AdamWState state;
  std::mt19937_64 rng(config.seed);
  const std::int64_t total = config.steps;
  const std::int64_t warmup = total / 10;

  for (std::int64_t step = 0; step < total; ++step) {
    const MaskedBatch mb = sample_masked_batch(model.config(), config.batch_size, config.mask_prob, rng);
    Graph g;
    ParamBinder bind(g, model, trainable);
    const NodeId loss = masked_loss_node(bind, mb);
    model.clear_grads();
    g.backward(loss);
    GradMap grads;
    for (const auto& id : trainable) {
      Tensor& p = model.param(id);
      if (!p.has_grad()) continue;
      const auto gd = p.grad();
      grads.emplace(id, Tensor(p.shape(), std::vector<double>(gd.begin(), gd.end())));
    }
    AdamWHyper step_hyper = hyper;
    step_hyper.lr = lr_at(step, total, warmup, config.lr);
    adamw_step(state, model.params(), grads, step_hyper);
  }
  model.clear_grads();

  const double final_loss = masked_token_loss(model, kEvalBatch, config.mask_prob, eval_seed);
  return PretrainResult{snapshot(model, "pretrained"), initial, final_loss};
}

}  // namespace ftlab
