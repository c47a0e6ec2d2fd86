#include <atomic>

#include "detail/kernel_rows.hpp"
#include "ftlab/numerics/kernels.hpp"

namespace ftlab::kernels {

namespace serial {

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate) {
  for (std::size_t i = 0; i < s.m; ++i) detail::gemm_row(a.data(), b.data(), c.data(), s, i, accumulate);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  for (std::size_t i = 0; i < s.m; ++i) detail::gemm_tn_row(a.data(), b.data(), c.data(), s, i, accumulate);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s,
             bool accumulate) {
  for (std::size_t i = 0; i < s.m; ++i) detail::gemm_nt_row(a.data(), b.data(), c.data(), s, i, accumulate);
}

void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) detail::softmax_row(x.data(), y.data(), cols, i);
}

void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps) {
  for (std::size_t i = 0; i < rows; ++i)
    detail::layer_norm_row(x.data(), gain.data(), bias.data(), out, cols, eps, i);
}

}  // namespace serial

namespace {
std::atomic<std::size_t> g_parallel_threshold{1u << 16};
}

std::size_t parallel_threshold() noexcept { return g_parallel_threshold.load(std::memory_order_relaxed); }

void set_parallel_threshold(std::size_t work) noexcept {
  g_parallel_threshold.store(work, std::memory_order_relaxed);
}

}  // namespace ftlab::kernels
