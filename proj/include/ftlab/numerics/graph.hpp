#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "ftlab/numerics/tensor.hpp"

namespace ftlab {

enum class OpKind {
  Constant,
  Leaf,
  MatMul,
  Transpose,
  Add,
  Mul,
  AddBias,
  Scale,
  Tanh,
  Gelu,
  SoftmaxRows,
  LayerNorm,
  Embed,
  CrossEntropy,
  Slice,
  ConcatRows,
  ConcatCols,
  MeanPoolRows,
  GatherRows,
  Sum,
};

std::string_view op_name(OpKind kind) noexcept;

struct NodeId {
  std::size_t index = 0;
  friend bool operator==(NodeId, NodeId) = default;
};

// Reverse-mode tape for one forward pass.
//
// Nodes are appended in evaluation order, so the vector is already a
// topological order. An op node is differentiable when any of its inputs is;
// nodes downstream only of constants carry no backward closure, which is how
// a forward pass over partially frozen parameters restricts backward to the
// trainable components.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, NodeId self)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  NodeId constant(Tensor value);
  // Binds an external parameter. When `param.requires_grad()`, backward
  // accumulates into param's gradient slot; `param` must outlive backward().
  NodeId leaf(Tensor& param);

  // Appends an op result. `backward` is dropped when no input needs a gradient.
  NodeId record(OpKind kind, std::vector<NodeId> inputs, Tensor value, BackwardFn backward);

  const Tensor& value(NodeId id) const;
  bool requires_grad(NodeId id) const;
  OpKind kind(NodeId id) const;
  const std::vector<NodeId>& inputs(NodeId id) const;
  std::size_t size() const noexcept { return nodes_.size(); }

  // Gradient of the root w.r.t. this node; zero-initialised on first access.
  std::span<double> grad_buffer(NodeId id);
  bool has_grad(NodeId id) const;
  std::span<const double> grad(NodeId id) const;

  // Seeds d(root)/d(root) = 1 and runs the closures in reverse order.
  void backward(NodeId root);

 private:
  struct Node {
    OpKind kind = OpKind::Constant;
    std::vector<NodeId> inputs;
    Tensor value;
    bool requires_grad = false;
    Tensor* bound = nullptr;
    BackwardFn backward;
    std::vector<double> grad;
  };

  const Node& node(NodeId id) const;
  Node& node(NodeId id);

  std::vector<Node> nodes_;
};

}  // namespace ftlab
