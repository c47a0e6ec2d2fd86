#pragma once

#include <cstdint>

#include "ftlab/model/snapshot.hpp"

namespace ftlab {

// Token 0 is reserved as the mask symbol during pretraining.
inline constexpr std::size_t kMaskToken = 0;

struct PretrainConfig {
  int steps = 500;
  int batch_size = 16;
  double lr = 1e-3;
  double mask_prob = 0.15;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PretrainResult {
  Snapshot snapshot;
  // Masked-token loss on a fixed held-out batch of 64 sequences, before and after training.
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Masked-token denoising on strided token progressions over the full
// vocabulary. The decoder ties its output projection to embed.token, so the
// pretrained state lives entirely in the model's own components. The head is
// not touched. Deterministic given the model and config.
PretrainResult pretrain(Model& model, const PretrainConfig& config);

// Masked-token cross-entropy of the model on a batch drawn from `seed`.
double masked_token_loss(const Model& model, int batch_size, double mask_prob, std::uint64_t seed);

}  // namespace ftlab
