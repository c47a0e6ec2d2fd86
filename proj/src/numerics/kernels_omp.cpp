#include <omp.h>

#include <cstdint>

#include "detail/kernel_rows.hpp"
#include "ftlab/numerics/kernels.hpp"

namespace ftlab::kernels {

namespace omp {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate) {
  const auto m = static_cast<std::int64_t>(s.m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i)
    detail::gemm_row(a.data(), b.data(), c.data(), s, static_cast<std::size_t>(i), accumulate);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  const auto m = static_cast<std::int64_t>(s.m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i)
    detail::gemm_tn_row(a.data(), b.data(), c.data(), s, static_cast<std::size_t>(i), accumulate);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  const auto m = static_cast<std::int64_t>(s.m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i)
    detail::gemm_nt_row(a.data(), b.data(), c.data(), s, static_cast<std::size_t>(i), accumulate);
}

void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols) {
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) detail::softmax_row(x.data(), y.data(), cols, static_cast<std::size_t>(i));
}

void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps) {
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    detail::layer_norm_row(x.data(), gain.data(), bias.data(), out, cols, eps, static_cast<std::size_t>(i));
}

}  // namespace omp

namespace {

bool go_parallel(std::size_t work) {
  return work >= parallel_threshold() && omp_get_max_threads() > 1 && !omp_in_parallel();
}

}  // namespace

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate) {
  if (go_parallel(s.m * s.k * s.n))
    omp::gemm(a, b, c, s, accumulate);
  else
    serial::gemm(a, b, c, s, accumulate);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  if (go_parallel(s.m * s.k * s.n))
    omp::gemm_tn(a, b, c, s, accumulate);
  else
    serial::gemm_tn(a, b, c, s, accumulate);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  if (go_parallel(s.m * s.k * s.n))
    omp::gemm_nt(a, b, c, s, accumulate);
  else
    serial::gemm_nt(a, b, c, s, accumulate);
}

void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols) {
  if (go_parallel(rows * cols * 8))
    omp::softmax_rows(x, y, rows, cols);
  else
    serial::softmax_rows(x, y, rows, cols);
}

void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps) {
  if (go_parallel(rows * cols * 8))
    omp::layer_norm_rows(x, gain, bias, out, rows, cols, eps);
  else
    serial::layer_norm_rows(x, gain, bias, out, rows, cols, eps);
}

}  // namespace ftlab::kernels
