#include <gtest/gtest.h>

#include <omp.h>

#include <cstring>

#include "ftlab/numerics/kernels.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace ftlab {
namespace {

using testing::Gen;

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class KernelsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(4);
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

TEST_F(KernelsTest, GemmVariantsMatchOracleAndEachOther) {
  Gen gen(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = gen.index(1, 23), k = gen.index(1, 19), n = gen.index(1, 21);
    const auto a = gen.vec(m * k, 1.0);
    const auto b = gen.vec(k * n, 1.0);
    std::vector<double> cs(m * n), co(m * n);
    kernels::serial::gemm(a, b, cs, {m, k, n}, false);
    kernels::omp::gemm(a, b, co, {m, k, n}, false);
    EXPECT_TRUE(same_bits(cs, co));
    const auto ref = testing::oracle_matmul(a, b, m, k, n);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(cs[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
  }
}

TEST_F(KernelsTest, TransposedGemmsMatchOracle) {
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = gen.index(1, 12), k = gen.index(1, 12), n = gen.index(1, 12);
    const auto a = gen.vec(m * k, 1.0);
    const auto b = gen.vec(k * n, 1.0);
    std::vector<double> at(k * m), bt(n * k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) at[p * m + i] = a[i * k + p];
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < n; ++j) bt[j * k + p] = b[p * n + j];
    const auto ref = testing::oracle_matmul(a, b, m, k, n);

    std::vector<double> tn_s(m * n), tn_o(m * n), nt_s(m * n), nt_o(m * n);
    kernels::serial::gemm_tn(at, b, tn_s, {m, k, n}, false);
    kernels::omp::gemm_tn(at, b, tn_o, {m, k, n}, false);
    kernels::serial::gemm_nt(a, bt, nt_s, {m, k, n}, false);
    kernels::omp::gemm_nt(a, bt, nt_o, {m, k, n}, false);
    EXPECT_TRUE(same_bits(tn_s, tn_o));
    EXPECT_TRUE(same_bits(nt_s, nt_o));
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(tn_s[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
      EXPECT_NEAR(nt_s[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
    }
  }
}

TEST_F(KernelsTest, AccumulateAddsToOutput) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{1, 0, 0, 1};
  std::vector<double> c{10, 10, 10, 10};
  kernels::serial::gemm(a, b, c, {2, 2, 2}, true);
  EXPECT_EQ(c, (std::vector<double>{11, 12, 13, 14}));
}

TEST_F(KernelsTest, SoftmaxRowsSumToOneAndMatchAcrossVariants) {
  Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = gen.index(1, 40), c = gen.index(1, 17);
    const auto x = gen.vec(r * c);
    std::vector<double> ys(r * c), yo(r * c);
    kernels::serial::softmax_rows(x, ys, r, c);
    kernels::omp::softmax_rows(x, yo, r, c);
    EXPECT_TRUE(same_bits(ys, yo));
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < c; ++j) {
        EXPECT_GE(ys[i * c + j], 0.0);
        s += ys[i * c + j];
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST_F(KernelsTest, SoftmaxIsStableForLargeInputs) {
  const std::vector<double> x{1000.0, 1000.0, -1000.0};
  std::vector<double> y(3);
  kernels::serial::softmax_rows(x, y, 1, 3);
  EXPECT_DOUBLE_EQ(y[0], 0.5);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
  EXPECT_EQ(y[2], 0.0);
}

TEST_F(KernelsTest, LayerNormMatchesFormulaAndAcrossVariants) {
  Gen gen(4);
  const std::size_t r = 9, c = 7;
  const auto x = gen.vec(r * c, 2.0);
  const auto gain = gen.vec(c, 1.0);
  const auto bias = gen.vec(c, 1.0);
  std::vector<double> ys(r * c), xs(r * c), rs(r), yo(r * c), xo(r * c), ro(r);
  kernels::serial::layer_norm_rows(x, gain, bias, {ys, xs, rs}, r, c, 1e-5);
  kernels::omp::layer_norm_rows(x, gain, bias, {yo, xo, ro}, r, c, 1e-5);
  EXPECT_TRUE(same_bits(ys, yo));
  EXPECT_TRUE(same_bits(xs, xo));
  EXPECT_TRUE(same_bits(rs, ro));
  for (std::size_t i = 0; i < r; ++i) {
    long double mean = 0, var = 0;
    for (std::size_t j = 0; j < c; ++j) mean += x[i * c + j];
    mean /= c;
    for (std::size_t j = 0; j < c; ++j) var += (x[i * c + j] - mean) * (x[i * c + j] - mean);
    var /= c;
    for (std::size_t j = 0; j < c; ++j) {
      const double expect = static_cast<double>((x[i * c + j] - mean) / std::sqrt(var + 1e-5L)) * gain[j] + bias[j];
      EXPECT_NEAR(ys[i * c + j], expect, 1e-12 * (1 + std::abs(expect)));
    }
  }
}

TEST_F(KernelsTest, DispatcherIsBitIdenticalAtAnyThreshold) {
  Gen gen(5);
  const std::size_t m = 64, k = 32, n = 48;
  const auto a = gen.vec(m * k, 1.0);
  const auto b = gen.vec(k * n, 1.0);
  const std::size_t saved = kernels::parallel_threshold();
  std::vector<double> c1(m * n), c2(m * n);
  kernels::set_parallel_threshold(1);
  kernels::gemm(a, b, c1, {m, k, n}, false);
  kernels::set_parallel_threshold(std::size_t{1} << 40);
  kernels::gemm(a, b, c2, {m, k, n}, false);
  kernels::set_parallel_threshold(saved);
  EXPECT_TRUE(same_bits(c1, c2));
}

}  // namespace
}  // namespace ftlab
