#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ftlab/numerics/kernels.hpp"

namespace ftlab::kernels::detail {

inline void gemm_row(const double* a, const double* b, double* c, GemmShape s, std::size_t i, bool accumulate) {
  double* crow = c + i * s.n;
  if (!accumulate) std::fill(crow, crow + s.n, 0.0);
  const double* arow = a + i * s.k;
  for (std::size_t p = 0; p < s.k; ++p) {
    const double av = arow[p];
    const double* brow = b + p * s.n;
    for (std::size_t j = 0; j < s.n; ++j) crow[j] += av * brow[j];
  }
}

inline void gemm_tn_row(const double* a, const double* b, double* c, GemmShape s, std::size_t i, bool accumulate) {
  double* crow = c + i * s.n;
  if (!accumulate) std::fill(crow, crow + s.n, 0.0);
  for (std::size_t p = 0; p < s.k; ++p) {
    const double av = a[p * s.m + i];
    const double* brow = b + p * s.n;
    for (std::size_t j = 0; j < s.n; ++j) crow[j] += av * brow[j];
  }
}

inline void gemm_nt_row(const double* a, const double* b, double* c, GemmShape s, std::size_t i, bool accumulate) {
  double* crow = c + i * s.n;
  const double* arow = a + i * s.k;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double* brow = b + j * s.k;
    double acc = 0.0;
    for (std::size_t p = 0; p < s.k; ++p) acc += arow[p] * brow[p];
    crow[j] = accumulate ? crow[j] + acc : acc;
  }
}

inline void softmax_row(const double* x, double* y, std::size_t cols, std::size_t i) {
  const double* xr = x + i * cols;
  double* yr = y + i * cols;
  double mx = xr[0];
  for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, xr[j]);
  double total = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    yr[j] = std::exp(xr[j] - mx);
    total += yr[j];
  }
  for (std::size_t j = 0; j < cols; ++j) yr[j] /= total;
}

inline void layer_norm_row(const double* x, const double* gain, const double* bias, LayerNormOut out,
                           std::size_t cols, double eps, std::size_t i) {
  const double* xr = x + i * cols;
  double mean = 0.0;
  for (std::size_t j = 0; j < cols; ++j) mean += xr[j];
  mean /= static_cast<double>(cols);
  double var = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double d = xr[j] - mean;
    var += d * d;
  }
  var /= static_cast<double>(cols);
  const double rstd = 1.0 / std::sqrt(var + eps);
  out.rstd[i] = rstd;
  double* xh = out.xhat.data() + i * cols;
  double* yr = out.y.data() + i * cols;
  for (std::size_t j = 0; j < cols; ++j) {
    xh[j] = (xr[j] - mean) * rstd;
    yr[j] = xh[j] * gain[j] + bias[j];
  }
}

}  // namespace ftlab::kernels::detail
