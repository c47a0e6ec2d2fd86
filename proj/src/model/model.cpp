#include "ftlab/model/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ftlab/errors.hpp"
#include "ftlab/numerics/ops.hpp"

namespace ftlab {

namespace {

constexpr double kInitStd = 0.02;

std::string layer_path(int layer, const char* rest) { return "layer." + std::to_string(layer) + "." + rest; }

}  // namespace

void ModelConfig::validate() const {
  if (num_layers < 1 || hidden < 1 || num_heads < 1 || ffn < 1 || vocab < 1 || max_seq_len < 1 || num_classes < 1)
    throw InvalidArgument("model dimensions must all be >= 1");
  if (hidden % num_heads != 0)
    throw InvalidArgument("hidden size " + std::to_string(hidden) + " is not divisible by num_heads " +
                          std::to_string(num_heads));
}

Model Model::build(const ModelConfig& config) {
  config.validate();
  Model m;
  m.config_ = config;
  const auto d = static_cast<std::size_t>(config.hidden);
  const auto f = static_cast<std::size_t>(config.ffn);

  auto add = [&](const std::string& path, Shape shape, double fill) {
    Tensor t(std::move(shape), fill);
    t.set_requires_grad(true);
    m.params_.emplace(ComponentId(path), std::move(t));
  };

  add("embed.token", {static_cast<std::size_t>(config.vocab), d}, 0.0);
  add("embed.position", {static_cast<std::size_t>(config.max_seq_len), d}, 0.0);
  for (int l = 1; l <= config.num_layers; ++l) {
    for (const char* proj : {"attn.query", "attn.key", "attn.value", "attn.output"}) {
      add(layer_path(l, proj) + ".weight", {d, d}, 0.0);
      add(layer_path(l, proj) + ".bias", {d}, 0.0);
    }
    add(layer_path(l, "ffn.w1.weight"), {d, f}, 0.0);
    add(layer_path(l, "ffn.w1.bias"), {f}, 0.0);
    add(layer_path(l, "ffn.w2.weight"), {f, d}, 0.0);
    add(layer_path(l, "ffn.w2.bias"), {d}, 0.0);
    for (const char* ln : {"ln1", "ln2"}) {
      add(layer_path(l, ln) + ".gain", {d}, 1.0);
      add(layer_path(l, ln) + ".bias", {d}, 0.0);
    }
  }
  add("head.out.weight", {d, static_cast<std::size_t>(config.num_classes)}, 0.0);
  add("head.out.bias", {static_cast<std::size_t>(config.num_classes)}, 0.0);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, kInitStd);
  for (auto& [id, t] : m.params_) {
    if (id.kind() != ParamKind::Weight) continue;
    for (double& v : t.data()) v = normal(rng);
  }
  return m;
}

Tensor& Model::param(const ComponentId& id) {
  auto it = params_.find(id);
  if (it == params_.end()) throw InvalidArgument("unknown component '" + id.path() + "'");
  return it->second;
}

const Tensor& Model::param(const ComponentId& id) const {
  auto it = params_.find(id);
  if (it == params_.end()) throw InvalidArgument("unknown component '" + id.path() + "'");
  return it->second;
}

ComponentSet Model::component_ids() const {
  ComponentSet out;
  for (const auto& [id, _] : params_) out.insert(id);
  return out;
}

ComponentSet Model::components_of_layer(int i) const {
  if (i < 1 || i > config_.num_layers)
    throw InvalidArgument("layer index " + std::to_string(i) + " outside [1," + std::to_string(config_.num_layers) +
                          "]");
  ComponentSet out;
  for (const auto& [id, _] : params_)
    if (id.scope() == Scope::Layer && id.layer() == i) out.insert(id);
  return out;
}

ComponentSet Model::components_in_scope(Scope scope) const {
  ComponentSet out;
  for (const auto& [id, _] : params_)
    if (id.scope() == scope) out.insert(id);
  return out;
}

void Model::reinit_head(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, kInitStd);
  for (auto& [id, t] : params_) {
    if (id.scope() != Scope::Head) continue;
    for (double& v : t.data()) v = id.kind() == ParamKind::Weight ? normal(rng) : 0.0;
  }
}

void Model::clear_grads() noexcept {
  for (auto& [_, t] : params_) t.clear_grad();
}

ParamBinder::ParamBinder(Graph& graph, Model& model, const ComponentSet& trainable)
    : graph_(graph), model_(&model), cmodel_(&model), trainable_(trainable) {}

ParamBinder::ParamBinder(Graph& graph, const Model& model) : graph_(graph), cmodel_(&model) {}

NodeId ParamBinder::operator()(const ComponentId& id) {
  if (auto it = bound_.find(id); it != bound_.end()) return it->second;
  NodeId node;
  if (model_ != nullptr && trainable_.contains(id)) {
    Tensor& t = model_->param(id);
    t.set_requires_grad(true);
    node = graph_.leaf(t);
  } else {
    node = graph_.constant(cmodel_->param(id).detached());
  }
  bound_.emplace(id, node);
  return node;
}

NodeId encode(ParamBinder& bind, const TokenBatch& batch) {
  const ModelConfig& cfg = bind.config();
  Graph& g = bind.graph();
  const std::size_t B = batch.batch, S = batch.seq_len;
  if (B == 0 || S == 0 || batch.tokens.size() != B * S)
    throw ShapeError("token batch size does not match batch * seq_len");
  if (S > static_cast<std::size_t>(cfg.max_seq_len))
    throw InvalidArgument("sequence length " + std::to_string(S) + " exceeds max " + std::to_string(cfg.max_seq_len));
  for (std::size_t t : batch.tokens)
    if (t >= static_cast<std::size_t>(cfg.vocab))
      throw InvalidArgument("token id " + std::to_string(t) + " out of range for vocab " + std::to_string(cfg.vocab));

  std::vector<std::size_t> positions(B * S);
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i % S;

  NodeId x = ops::add(g, ops::embed(g, bind("embed.token"), batch.tokens), ops::embed(g, bind("embed.position"), positions));

  const auto d = static_cast<std::size_t>(cfg.hidden);
  const auto H = static_cast<std::size_t>(cfg.num_heads);
  const std::size_t dh = d / H;
  const double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));

  for (int l = 1; l <= cfg.num_layers; ++l) {
    auto p = [&](const char* rest) { return bind(layer_path(l, rest)); };
    const NodeId q = ops::add_bias(g, ops::matmul(g, x, p("attn.query.weight")), p("attn.query.bias"));
    const NodeId k = ops::add_bias(g, ops::matmul(g, x, p("attn.key.weight")), p("attn.key.bias"));
    const NodeId v = ops::add_bias(g, ops::matmul(g, x, p("attn.value.weight")), p("attn.value.bias"));

    std::vector<NodeId> seqs;
    seqs.reserve(B);
    for (std::size_t b = 0; b < B; ++b) {
      std::vector<NodeId> heads;
      heads.reserve(H);
      for (std::size_t h = 0; h < H; ++h) {
        const NodeId qh = ops::slice(g, q, b * S, S, h * dh, dh);
        const NodeId kh = ops::slice(g, k, b * S, S, h * dh, dh);
        const NodeId vh = ops::slice(g, v, b * S, S, h * dh, dh);
        const NodeId scores = ops::scale(g, ops::matmul(g, qh, ops::transpose(g, kh)), att_scale);
        heads.push_back(ops::matmul(g, ops::softmax_rows(g, scores), vh));
      }
      seqs.push_back(H == 1 ? heads[0] : ops::concat_cols(g, heads));
    }
    const NodeId attn = B == 1 ? seqs[0] : ops::concat_rows(g, seqs);
    const NodeId attn_out = ops::add_bias(g, ops::matmul(g, attn, p("attn.output.weight")), p("attn.output.bias"));
    x = ops::layer_norm(g, ops::add(g, x, attn_out), p("ln1.gain"), p("ln1.bias"));

    const NodeId h1 = ops::gelu(g, ops::add_bias(g, ops::matmul(g, x, p("ffn.w1.weight")), p("ffn.w1.bias")));
    const NodeId h2 = ops::add_bias(g, ops::matmul(g, h1, p("ffn.w2.weight")), p("ffn.w2.bias"));
    x = ops::layer_norm(g, ops::add(g, x, h2), p("ln2.gain"), p("ln2.bias"));
  }
  return x;
}

NodeId classify(ParamBinder& bind, NodeId hidden, std::size_t seq_len) {
  Graph& g = bind.graph();
  const NodeId pooled = ops::mean_pool_rows(g, hidden, seq_len);
  return ops::add_bias(g, ops::matmul(g, pooled, bind("head.out.weight")), bind("head.out.bias"));
}

Tensor forward_classify(const Model& model, const TokenBatch& batch) {
  Graph g;
  ParamBinder bind(g, model);
  const NodeId logits = classify(bind, encode(bind, batch), batch.seq_len);
  return g.value(logits).detached();
}

}  // namespace ftlab
