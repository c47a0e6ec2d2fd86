// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ftlab/numerics/kernels.hpp"

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

template <bool Parallel>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vec(n * n, 1);
  const auto b = random_vec(n * n, 2);
  std::vector<double> c(n * n);
  const ftlab::kernels::GemmShape s{n, n, n};
  for (auto _ : state) {
    if constexpr (Parallel) ftlab::kernels::omp::gemm(a, b, c, s, false);
    else ftlab::kernels::serial::gemm(a, b, c, s, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <bool Parallel>
void BM_Softmax(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 256;
  const auto x = random_vec(rows * cols, 3);
  std::vector<double> y(rows * cols);
  for (auto _ : state) {
    if constexpr (Parallel) ftlab::kernels::omp::softmax_rows(x, y, rows, cols);
    else ftlab::kernels::serial::softmax_rows(x, y, rows, cols);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_LayerNorm(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = 256;
  const auto x = random_vec(rows * cols, 4);
  const std::vector<double> gain(cols, 1.0);
  const std::vector<double> bias(cols, 0.0);
  std::vector<double> y(rows * cols), xhat(rows * cols), rstd(rows);
  const ftlab::kernels::LayerNormOut out{y, xhat, rstd};
  for (auto _ : state) {
    if constexpr (Parallel) ftlab::kernels::omp::layer_norm_rows(x, gain, bias, out, rows, cols, 1e-5);
    else ftlab::kernels::serial::layer_norm_rows(x, gain, bias, out, rows, cols, 1e-5);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_Gemm<false>)->Name("gemm/serial")->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<true>)->Name("gemm/omp")->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_Softmax<false>)->Name("softmax/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_Softmax<true>)->Name("softmax/omp")->Arg(64)->Arg(1024);
BENCHMARK(BM_LayerNorm<false>)->Name("layer_norm/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_LayerNorm<true>)->Name("layer_norm/omp")->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
