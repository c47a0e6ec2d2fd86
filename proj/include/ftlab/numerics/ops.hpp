#pragma once

#include <cstddef>
#include <span>

#include "ftlab/numerics/graph.hpp"

// Differentiable forward ops. Every op validates shapes, records itself on
// the graph, and rejects non-finite results with NumericError.
namespace ftlab::ops {

inline constexpr double kLayerNormEps = 1e-5;

// [m,k] x [k,n] -> [m,n]
NodeId matmul(Graph& g, NodeId a, NodeId b);
NodeId transpose(Graph& g, NodeId x);
NodeId add(Graph& g, NodeId a, NodeId b);
// Elementwise product.
NodeId mul(Graph& g, NodeId a, NodeId b);
// x [r,c] plus bias [c] broadcast over rows.
NodeId add_bias(Graph& g, NodeId x, NodeId bias);
NodeId scale(Graph& g, NodeId x, double c);
NodeId tanh(Graph& g, NodeId x);
// tanh approximation.
NodeId gelu(Graph& g, NodeId x);
NodeId softmax_rows(Graph& g, NodeId x);
NodeId layer_norm(Graph& g, NodeId x, NodeId gain, NodeId bias, double eps = kLayerNormEps);
// Row lookup: table [V,d], ids < V -> [ids.size(), d].
NodeId embed(Graph& g, NodeId table, std::span<const std::size_t> ids);
// Mean negative log-likelihood over rows; scalar result.
NodeId cross_entropy(Graph& g, NodeId logits, std::span<const std::size_t> labels);
NodeId slice(Graph& g, NodeId x, std::size_t row0, std::size_t nrows, std::size_t col0, std::size_t ncols);
NodeId concat_rows(Graph& g, std::span<const NodeId> parts);
NodeId concat_cols(Graph& g, std::span<const NodeId> parts);
// Averages each consecutive block of `group` rows: [r,c] -> [r/group, c].
NodeId mean_pool_rows(Graph& g, NodeId x, std::size_t group);
NodeId gather_rows(Graph& g, NodeId x, std::span<const std::size_t> rows);
NodeId sum(Graph& g, NodeId x);

}  // namespace ftlab::ops
