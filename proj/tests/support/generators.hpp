#pragma once

// Seeded random inputs for property tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ftlab/model/model.hpp"
#include "ftlab/numerics/tensor.hpp"

namespace ftlab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double stddev = 1.0) { return std::normal_distribution<double>(0.0, stddev)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  // Normal values at a random scale spanning several orders of magnitude.
  std::vector<double> vec(std::size_t n) {
    const double scale = std::pow(10.0, uniform(-3.0, 3.0));
    std::vector<double> v(n);
    for (double& x : v) x = normal(scale);
    return v;
  }

  std::vector<double> vec(std::size_t n, double stddev) {
    std::vector<double> v(n);
    for (double& x : v) x = normal(stddev);
    return v;
  }

  std::vector<std::size_t> labels(std::size_t n, std::size_t classes) {
    std::vector<std::size_t> v(n);
    for (auto& x : v) x = index(0, classes - 1);
    return v;
  }

  Tensor tensor(Shape shape, double stddev = 1.0) {
    return Tensor(shape, vec(shape_numel(shape), stddev));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Small model used throughout the unit tests.
inline ModelConfig tiny_model_config(int layers = 2) {
  ModelConfig c;
  c.num_layers = layers;
  c.hidden = 8;
  c.num_heads = 2;
  c.ffn = 16;
  c.vocab = 16;
  c.max_seq_len = 8;
  c.num_classes = 2;
  c.seed = 7;
  return c;
}

inline TokenBatch random_batch(Gen& gen, const ModelConfig& c, std::size_t batch, std::size_t seq_len) {
  TokenBatch b;
  b.batch = batch;
  b.seq_len = seq_len;
  for (std::size_t i = 0; i < batch * seq_len; ++i) b.tokens.push_back(gen.index(0, static_cast<std::size_t>(c.vocab) - 1));
  return b;
}

}  // namespace ftlab::testing
