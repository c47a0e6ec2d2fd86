#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "ftlab/model/component.hpp"
#include "ftlab/numerics/graph.hpp"

namespace ftlab {

struct ModelConfig {
  int num_layers = 4;
  int hidden = 32;
  int num_heads = 2;
  int ffn = 64;
  int vocab = 64;
  int max_seq_len = 16;
  int num_classes = 2;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on non-positive dims or hidden % num_heads != 0.
  void validate() const;
};

// Row-major [batch, seq_len] token ids.
struct TokenBatch {
  std::vector<std::size_t> tokens;
  std::size_t batch = 0;
  std::size_t seq_len = 0;
};

// Post-LN transformer encoder with mean pooling and a linear classifier head.
class Model {
 public:
  // Weights ~ N(0, 0.02), biases 0, layer-norm gains 1, drawn from config.seed.
  static Model build(const ModelConfig& config);

  const ModelConfig& config() const noexcept { return config_; }
  const ParamMap& params() const noexcept { return params_; }
  ParamMap& params() noexcept { return params_; }
  Tensor& param(const ComponentId& id);
  const Tensor& param(const ComponentId& id) const;

  ComponentSet component_ids() const;
  // All and only the components of layer i, 1 <= i <= L.
  ComponentSet components_of_layer(int i) const;
  ComponentSet components_in_scope(Scope scope) const;

  // Fresh N(0, 0.02) head weight and zero head bias.
  void reinit_head(std::uint64_t seed);
  void clear_grads() noexcept;

 private:
  ModelConfig config_;
  ParamMap params_;
};

inline Model build_model(const ModelConfig& config) { return Model::build(config); }

// Maps components to graph nodes for one forward pass. Components in the
// trainable set become gradient-tracking leaves bound to the model's
// tensors; everything else enters as a constant. Each component is bound at
// most once per graph.
class ParamBinder {
 public:
  ParamBinder(Graph& graph, Model& model, const ComponentSet& trainable);
  // Inference binder: every component is a constant.
  ParamBinder(Graph& graph, const Model& model);

  NodeId operator()(const ComponentId& id);
  NodeId operator()(const std::string& path) { return (*this)(ComponentId(path)); }

  Graph& graph() noexcept { return graph_; }
  const ModelConfig& config() const noexcept { return cmodel_->config(); }

 private:
  Graph& graph_;
  Model* model_ = nullptr;
  const Model* cmodel_ = nullptr;
  ComponentSet trainable_;
  std::map<ComponentId, NodeId> bound_;
};

// Token + position embeddings followed by the L encoder layers; returns the
// hidden states as a [batch*seq_len, hidden] node.
NodeId encode(ParamBinder& bind, const TokenBatch& batch);
// Mean-pools hidden states per sequence and applies the head: [batch, classes].
NodeId classify(ParamBinder& bind, NodeId hidden, std::size_t seq_len);

// Inference-only logits [batch, num_classes].
Tensor forward_classify(const Model& model, const TokenBatch& batch);

}  // namespace ftlab
