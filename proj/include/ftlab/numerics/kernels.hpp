#pragma once

#include <cstddef>
#include <span>

// Dense row kernels used by the autodiff ops.
//
// Each kernel has a serial reference and an OpenMP variant that splits the
// work over output rows. Both variants run the same per-row arithmetic in the
// same order, so their results are bit-identical; the dispatching entry
// points pick the OpenMP path only for large problems outside an existing
// parallel region.
namespace ftlab::kernels {

// C[m,n] (+)= A[m,k] * B[k,n]
// gemm_tn: C[m,n] (+)= A[k,m]^T * B[k,n]
// gemm_nt: C[m,n] (+)= A[m,k] * B[n,k]^T
struct GemmShape {
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t n = 0;
};

struct LayerNormOut {
  std::span<double> y;
  std::span<double> xhat;
  std::span<double> rstd;  // one entry per row
};

namespace serial {
void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols);
void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps);
}  // namespace serial

namespace omp {
void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols);
void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps);
}  // namespace omp

void gemm(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, GemmShape s, bool accumulate);
void softmax_rows(std::span<const double> x, std::span<double> y, std::size_t rows, std::size_t cols);
void layer_norm_rows(std::span<const double> x, std::span<const double> gain, std::span<const double> bias,
                     LayerNormOut out, std::size_t rows, std::size_t cols, double eps);

// Minimum multiply-add count before the dispatchers go parallel.
std::size_t parallel_threshold() noexcept;
void set_parallel_threshold(std::size_t work) noexcept;

}  // namespace ftlab::kernels
