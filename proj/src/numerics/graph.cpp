#include "ftlab/numerics/graph.hpp"

#include "ftlab/errors.hpp"

namespace ftlab {

std::string_view op_name(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::Constant: return "constant";
    case OpKind::Leaf: return "leaf";
    case OpKind::MatMul: return "matmul";
    case OpKind::Transpose: return "transpose";
    case OpKind::Add: return "add";
    case OpKind::Mul: return "mul";
    case OpKind::AddBias: return "add_bias";
    case OpKind::Scale: return "scale";
    case OpKind::Tanh: return "tanh";
    case OpKind::Gelu: return "gelu";
    case OpKind::SoftmaxRows: return "softmax_rows";
    case OpKind::LayerNorm: return "layer_norm";
    case OpKind::Embed: return "embed";
    case OpKind::CrossEntropy: return "cross_entropy";
    case OpKind::Slice: return "slice";
    case OpKind::ConcatRows: return "concat_rows";
    case OpKind::ConcatCols: return "concat_cols";
    case OpKind::MeanPoolRows: return "mean_pool_rows";
    case OpKind::GatherRows: return "gather_rows";
    case OpKind::Sum: return "sum";
  }
  return "unknown";
}

NodeId Graph::constant(Tensor value) {
  value.check_finite("constant");
  value.clear_grad();
  value.set_requires_grad(false);
  Node n;
  n.kind = OpKind::Constant;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return NodeId{nodes_.size() - 1};
}

NodeId Graph::leaf(Tensor& param) {
  param.check_finite("leaf");
  Node n;
  n.kind = OpKind::Leaf;
  n.value = param.detached();
  n.requires_grad = param.requires_grad();
  n.bound = n.requires_grad ? &param : nullptr;
  nodes_.push_back(std::move(n));
  return NodeId{nodes_.size() - 1};
}

NodeId Graph::record(OpKind kind, std::vector<NodeId> inputs, Tensor value, BackwardFn backward) {
  value.check_finite(op_name(kind));
  bool needs = false;
  for (NodeId in : inputs) {
    if (in.index >= nodes_.size()) throw InvalidArgument("graph input id out of range");
    needs = needs || nodes_[in.index].requires_grad;
  }
  Node n;
  n.kind = kind;
  n.inputs = std::move(inputs);
  n.value = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return NodeId{nodes_.size() - 1};
}

const Graph::Node& Graph::node(NodeId id) const {
  if (id.index >= nodes_.size()) throw InvalidArgument("graph node id out of range");
  return nodes_[id.index];
}

Graph::Node& Graph::node(NodeId id) {
  if (id.index >= nodes_.size()) throw InvalidArgument("graph node id out of range");
  return nodes_[id.index];
}

const Tensor& Graph::value(NodeId id) const { return node(id).value; }
bool Graph::requires_grad(NodeId id) const { return node(id).requires_grad; }
OpKind Graph::kind(NodeId id) const { return node(id).kind; }
const std::vector<NodeId>& Graph::inputs(NodeId id) const { return node(id).inputs; }

std::span<double> Graph::grad_buffer(NodeId id) {
  Node& n = node(id);
  if (n.grad.empty()) n.grad.assign(n.value.numel(), 0.0);
  return n.grad;
}

bool Graph::has_grad(NodeId id) const { return !node(id).grad.empty(); }

std::span<const double> Graph::grad(NodeId id) const {
  const Node& n = node(id);
  if (n.grad.empty()) throw InvalidArgument("node has no gradient; run backward() first");
  return n.grad;
}

void Graph::backward(NodeId root) {
  if (nodes_.empty()) throw InvalidArgument("backward on an empty graph");
  const Node& r = node(root);
  if (r.value.numel() != 1)
    throw ShapeError("backward root must be scalar, got shape " + shape_string(r.value.shape()));
  if (!r.requires_grad) throw InvalidArgument("backward root does not depend on any requires_grad tensor");

  for (Node& n : nodes_) n.grad.clear();
  grad_buffer(root)[0] = 1.0;

  for (std::size_t i = root.index + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, NodeId{i});
  }

  for (Node& n : nodes_) {
    if (n.kind != OpKind::Leaf || n.bound == nullptr) continue;
    auto dst = n.bound->mutable_grad();
    if (n.grad.empty()) continue;
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += n.grad[j];
  }
}

}  // namespace ftlab
