#include "ftlab/numerics/ops.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ftlab/errors.hpp"
#include "ftlab/numerics/kernels.hpp"

namespace ftlab::ops {

namespace {

const Tensor& matrix_value(const Graph& g, NodeId id, const char* op) {
  const Tensor& t = g.value(id);
  if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
  return t;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
}

// Accumulates `src` into the input's gradient when that input is differentiable.
void accumulate(Graph& g, NodeId input, std::span<const double> src) {
  if (!g.requires_grad(input)) return;
  auto dst = g.grad_buffer(input);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

constexpr double kGeluC = 0.044715;
const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

}  // namespace

NodeId matmul(Graph& g, NodeId a, NodeId b) {
  const Tensor& av = matrix_value(g, a, "matmul");
  const Tensor& bv = matrix_value(g, b, "matmul");
  const std::size_t m = av.shape()[0], k = av.shape()[1], n = bv.shape()[1];
  if (bv.shape()[0] != k)
    throw ShapeError("matmul: inner dimensions differ " + shape_string(av.shape()) + " x " +
                     shape_string(bv.shape()));
  Tensor out({m, n});
  kernels::gemm(av.data(), bv.data(), out.data(), {m, k, n}, false);
  return g.record(OpKind::MatMul, {a, b}, std::move(out), [a, b, m, k, n](Graph& gr, NodeId self) {
    auto dc = gr.grad(self);
    if (gr.requires_grad(a))
      kernels::gemm_nt(dc, gr.value(b).data(), gr.grad_buffer(a), {m, n, k}, true);
    if (gr.requires_grad(b))
      kernels::gemm_tn(gr.value(a).data(), dc, gr.grad_buffer(b), {k, m, n}, true);
  });
}

NodeId transpose(Graph& g, NodeId x) {
  const Tensor& xv = matrix_value(g, x, "transpose");
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = xv[i * c + j];
  return g.record(OpKind::Transpose, {x}, std::move(out), [x, r, c](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) dx[i * c + j] += dy[j * r + i];
  });
}

NodeId add(Graph& g, NodeId a, NodeId b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same_shape(av, bv, "add");
  Tensor out = av.detached();
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] += bv[i];
  return g.record(OpKind::Add, {a, b}, std::move(out), [a, b](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    accumulate(gr, a, dy);
    accumulate(gr, b, dy);
  });
}

NodeId mul(Graph& g, NodeId a, NodeId b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  require_same_shape(av, bv, "mul");
  Tensor out = av.detached();
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= bv[i];
  return g.record(OpKind::Mul, {a, b}, std::move(out), [a, b](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    const auto& av2 = gr.value(a);
    const auto& bv2 = gr.value(b);
    if (gr.requires_grad(a)) {
      auto da = gr.grad_buffer(a);
      for (std::size_t i = 0; i < da.size(); ++i) da[i] += dy[i] * bv2[i];
    }
    if (gr.requires_grad(b)) {
      auto db = gr.grad_buffer(b);
      for (std::size_t i = 0; i < db.size(); ++i) db[i] += dy[i] * av2[i];
    }
  });
}

NodeId add_bias(Graph& g, NodeId x, NodeId bias) {
  const Tensor& xv = matrix_value(g, x, "add_bias");
  const Tensor& bv = g.value(bias);
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  if (bv.rank() != 1 || bv.numel() != c)
    throw ShapeError("add_bias: bias " + shape_string(bv.shape()) + " incompatible with " +
                     shape_string(xv.shape()));
  Tensor out = xv.detached();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] += bv[j];
  return g.record(OpKind::AddBias, {x, bias}, std::move(out), [x, bias, r, c](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    accumulate(gr, x, dy);
    if (gr.requires_grad(bias)) {
      auto db = gr.grad_buffer(bias);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) db[j] += dy[i * c + j];
    }
  });
}

NodeId scale(Graph& g, NodeId x, double c) {
  if (!std::isfinite(c)) throw NumericError("scale: non-finite factor");
  Tensor out = g.value(x).detached();
  for (double& v : out.data()) v *= c;
  return g.record(OpKind::Scale, {x}, std::move(out), [x, c](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * c;
  });
}

NodeId tanh(Graph& g, NodeId x) {
  Tensor out = g.value(x).detached();
  for (double& v : out.data()) v = std::tanh(v);
  return g.record(OpKind::Tanh, {x}, std::move(out), [x](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    const auto y = gr.value(self).data();
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
  });
}

NodeId gelu(Graph& g, NodeId x) {
  Tensor out = g.value(x).detached();
  for (double& v : out.data()) {
    const double u = kSqrt2OverPi * (v + kGeluC * v * v * v);
    v = 0.5 * v * (1.0 + std::tanh(u));
  }
  return g.record(OpKind::Gelu, {x}, std::move(out), [x](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    const auto xv = gr.value(x).data();
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < dx.size(); ++i) {
      const double v = xv[i];
      const double t = std::tanh(kSqrt2OverPi * (v + kGeluC * v * v * v));
      const double du = kSqrt2OverPi * (1.0 + 3.0 * kGeluC * v * v);
      dx[i] += dy[i] * (0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du);
    }
  });
}

NodeId softmax_rows(Graph& g, NodeId x) {
  const Tensor& xv = matrix_value(g, x, "softmax_rows");
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  Tensor out({r, c});
  kernels::softmax_rows(xv.data(), out.data(), r, c);
  return g.record(OpKind::SoftmaxRows, {x}, std::move(out), [x, r, c](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    const auto y = gr.value(self).data();
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += dy[i * c + j] * y[i * c + j];
      for (std::size_t j = 0; j < c; ++j) dx[i * c + j] += y[i * c + j] * (dy[i * c + j] - dot);
    }
  });
}

NodeId layer_norm(Graph& g, NodeId x, NodeId gain, NodeId bias, double eps) {
  const Tensor& xv = matrix_value(g, x, "layer_norm");
  const Tensor& gv = g.value(gain);
  const Tensor& bv = g.value(bias);
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  if (gv.rank() != 1 || gv.numel() != c || bv.rank() != 1 || bv.numel() != c)
    throw ShapeError("layer_norm: gain/bias must be vectors of length " + std::to_string(c));
  if (!(eps > 0.0)) throw InvalidArgument("layer_norm: eps must be positive");
  Tensor out({r, c});
  std::vector<double> xhat(r * c), rstd(r);
  kernels::layer_norm_rows(xv.data(), gv.data(), bv.data(), {out.data(), xhat, rstd}, r, c, eps);
  return g.record(
      OpKind::LayerNorm, {x, gain, bias}, std::move(out),
      [x, gain, bias, r, c, xhat = std::move(xhat), rstd = std::move(rstd)](Graph& gr, NodeId self) {
        auto dy = gr.grad(self);
        const auto gv2 = gr.value(gain).data();
        if (gr.requires_grad(x)) {
          auto dx = gr.grad_buffer(x);
          const double inv_c = 1.0 / static_cast<double>(c);
          for (std::size_t i = 0; i < r; ++i) {
            double mean_d = 0.0, mean_dx = 0.0;
            for (std::size_t j = 0; j < c; ++j) {
              const double d = dy[i * c + j] * gv2[j];
              mean_d += d;
              mean_dx += d * xhat[i * c + j];
            }
            mean_d *= inv_c;
            mean_dx *= inv_c;
            for (std::size_t j = 0; j < c; ++j) {
              const double d = dy[i * c + j] * gv2[j];
              dx[i * c + j] += rstd[i] * (d - mean_d - xhat[i * c + j] * mean_dx);
            }
          }
        }
        if (gr.requires_grad(gain)) {
          auto dg = gr.grad_buffer(gain);
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) dg[j] += dy[i * c + j] * xhat[i * c + j];
        }
        if (gr.requires_grad(bias)) {
          auto db = gr.grad_buffer(bias);
          for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) db[j] += dy[i * c + j];
        }
      });
}

NodeId embed(Graph& g, NodeId table, std::span<const std::size_t> ids) {
  const Tensor& tv = matrix_value(g, table, "embed");
  const std::size_t vocab = tv.shape()[0], d = tv.shape()[1];
  if (ids.empty()) throw ShapeError("embed: empty id list");
  Tensor out({ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= vocab)
      throw InvalidArgument("embed: id " + std::to_string(ids[i]) + " out of range for table of " +
                            std::to_string(vocab) + " rows");
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = tv[ids[i] * d + j];
  }
  std::vector<std::size_t> rows(ids.begin(), ids.end());
  return g.record(OpKind::Embed, {table}, std::move(out), [table, d, rows = std::move(rows)](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dt = gr.grad_buffer(table);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) dt[rows[i] * d + j] += dy[i * d + j];
  });
}

NodeId cross_entropy(Graph& g, NodeId logits, std::span<const std::size_t> labels) {
  const Tensor& lv = matrix_value(g, logits, "cross_entropy");
  const std::size_t r = lv.shape()[0], c = lv.shape()[1];
  if (labels.size() != r)
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " + std::to_string(r) + " rows");
  for (std::size_t lab : labels)
    if (lab >= c)
      throw InvalidArgument("cross_entropy: label " + std::to_string(lab) + " out of range [0," + std::to_string(c) +
                            ")");
  std::vector<double> probs(r * c);
  kernels::softmax_rows(lv.data(), probs, r, c);
  double loss = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double* row = lv.data().data() + i * c;
    double mx = row[0];
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) total += std::exp(row[j] - mx);
    loss += (mx + std::log(total)) - row[labels[i]];
  }
  loss /= static_cast<double>(r);
  std::vector<std::size_t> labs(labels.begin(), labels.end());
  return g.record(OpKind::CrossEntropy, {logits}, Tensor::scalar(loss),
                  [logits, r, c, probs = std::move(probs), labs = std::move(labs)](Graph& gr, NodeId self) {
                    const double dl = gr.grad(self)[0] / static_cast<double>(r);
                    auto dx = gr.grad_buffer(logits);
                    for (std::size_t i = 0; i < r; ++i)
                      for (std::size_t j = 0; j < c; ++j)
                        dx[i * c + j] += dl * (probs[i * c + j] - (j == labs[i] ? 1.0 : 0.0));
                  });
}

NodeId slice(Graph& g, NodeId x, std::size_t row0, std::size_t nrows, std::size_t col0, std::size_t ncols) {
  const Tensor& xv = matrix_value(g, x, "slice");
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  if (nrows == 0 || ncols == 0 || row0 + nrows > r || col0 + ncols > c)
    throw ShapeError("slice: window out of bounds for " + shape_string(xv.shape()));
  Tensor out({nrows, ncols});
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out[i * ncols + j] = xv[(row0 + i) * c + col0 + j];
  return g.record(OpKind::Slice, {x}, std::move(out), [x, row0, nrows, col0, ncols, c](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j) dx[(row0 + i) * c + col0 + j] += dy[i * ncols + j];
  });
}

NodeId concat_rows(Graph& g, std::span<const NodeId> parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const std::size_t c = matrix_value(g, parts[0], "concat_rows").shape()[1];
  std::size_t total = 0;
  for (NodeId p : parts) {
    const Tensor& t = matrix_value(g, p, "concat_rows");
    if (t.shape()[1] != c) throw ShapeError("concat_rows: column count mismatch");
    total += t.shape()[0];
  }
  Tensor out({total, c});
  std::size_t offset = 0;
  for (NodeId p : parts) {
    const auto src = g.value(p).data();
    std::copy(src.begin(), src.end(), out.data().begin() + static_cast<std::ptrdiff_t>(offset));
    offset += src.size();
  }
  std::vector<NodeId> inputs(parts.begin(), parts.end());
  return g.record(OpKind::ConcatRows, inputs, std::move(out), [inputs](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    std::size_t off = 0;
    for (NodeId p : inputs) {
      const std::size_t n = gr.value(p).numel();
      accumulate(gr, p, dy.subspan(off, n));
      off += n;
    }
  });
}

NodeId concat_cols(Graph& g, std::span<const NodeId> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const std::size_t r = matrix_value(g, parts[0], "concat_cols").shape()[0];
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (NodeId p : parts) {
    const Tensor& t = matrix_value(g, p, "concat_cols");
    if (t.shape()[0] != r) throw ShapeError("concat_cols: row count mismatch");
    widths.push_back(t.shape()[1]);
    total += t.shape()[1];
  }
  Tensor out({r, total});
  std::size_t col = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& t = g.value(parts[k]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < widths[k]; ++j) out[i * total + col + j] = t[i * widths[k] + j];
    col += widths[k];
  }
  std::vector<NodeId> inputs(parts.begin(), parts.end());
  return g.record(OpKind::ConcatCols, inputs, std::move(out),
                  [inputs, widths = std::move(widths), r, total](Graph& gr, NodeId self) {
                    auto dy = gr.grad(self);
                    std::size_t col0 = 0;
                    for (std::size_t k = 0; k < inputs.size(); ++k) {
                      if (gr.requires_grad(inputs[k])) {
                        auto dx = gr.grad_buffer(inputs[k]);
                        for (std::size_t i = 0; i < r; ++i)
                          for (std::size_t j = 0; j < widths[k]; ++j)
                            dx[i * widths[k] + j] += dy[i * total + col0 + j];
                      }
                      col0 += widths[k];
                    }
                  });
}

NodeId mean_pool_rows(Graph& g, NodeId x, std::size_t group) {
  const Tensor& xv = matrix_value(g, x, "mean_pool_rows");
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  if (group == 0 || r % group != 0)
    throw ShapeError("mean_pool_rows: group " + std::to_string(group) + " does not divide " + std::to_string(r));
  const std::size_t out_rows = r / group;
  const double inv = 1.0 / static_cast<double>(group);
  Tensor out({out_rows, c});
  for (std::size_t o = 0; o < out_rows; ++o) {
    for (std::size_t k = 0; k < group; ++k)
      for (std::size_t j = 0; j < c; ++j) out[o * c + j] += xv[(o * group + k) * c + j];
    for (std::size_t j = 0; j < c; ++j) out[o * c + j] *= inv;
  }
  return g.record(OpKind::MeanPoolRows, {x}, std::move(out), [x, group, out_rows, c, inv](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dx = gr.grad_buffer(x);
    for (std::size_t o = 0; o < out_rows; ++o)
      for (std::size_t k = 0; k < group; ++k)
        for (std::size_t j = 0; j < c; ++j) dx[(o * group + k) * c + j] += dy[o * c + j] * inv;
  });
}

NodeId gather_rows(Graph& g, NodeId x, std::span<const std::size_t> rows) {
  const Tensor& xv = matrix_value(g, x, "gather_rows");
  const std::size_t r = xv.shape()[0], c = xv.shape()[1];
  if (rows.empty()) throw ShapeError("gather_rows: empty row list");
  Tensor out({rows.size(), c});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= r) throw InvalidArgument("gather_rows: row index out of range");
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = xv[rows[i] * c + j];
  }
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return g.record(OpKind::GatherRows, {x}, std::move(out), [x, c, idx = std::move(idx)](Graph& gr, NodeId self) {
    auto dy = gr.grad(self);
    auto dx = gr.grad_buffer(x);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) dx[idx[i] * c + j] += dy[i * c + j];
  });
}

NodeId sum(Graph& g, NodeId x) {
  double total = 0.0;
  for (double v : g.value(x).data()) total += v;
  return g.record(OpKind::Sum, {x}, Tensor::scalar(total), [x](Graph& gr, NodeId self) {
    const double dy = gr.grad(self)[0];
    auto dx = gr.grad_buffer(x);
    for (double& v : dx) v += dy;
  });
}

}  // namespace ftlab::ops
