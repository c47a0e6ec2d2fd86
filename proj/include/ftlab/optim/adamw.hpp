#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ftlab/model/component.hpp"

namespace ftlab {

using GradMap = std::map<ComponentId, Tensor>;

struct AdamWHyper {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  bool bias_correction = true;

  void validate() const;
};

struct MomentBuffers {
  std::vector<double> m;
  std::vector<double> v;
  // Updates applied to this component; drives its bias correction.
  std::int64_t step = 0;
};

// First/second moments per component plus the global step counter.
// Components enter with zero moments the first time they receive a gradient.
class AdamWState {
 public:
  std::int64_t step() const noexcept { return step_; }
  bool has(const ComponentId& id) const { return moments_.contains(id); }
  const MomentBuffers& moments(const ComponentId& id) const;
  std::size_t size() const noexcept { return moments_.size(); }
  void reset() noexcept;

 private:
  friend void adamw_step(AdamWState&, ParamMap&, const GradMap&, const AdamWHyper&);
  std::map<ComponentId, MomentBuffers> moments_;
  std::int64_t step_ = 0;
};

// Decoupled weight decay applies to weight matrices and embeddings, never to
// biases or layer-norm gains.
bool applies_weight_decay(const ComponentId& id) noexcept;

// One AdamW update of a single tensor at per-tensor step `t` (>= 1).
void adamw_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                  std::int64_t t, const AdamWHyper& hyper, bool decay);

// Updates exactly the components present in `grads`; all other parameters
// and their optimizer state are left untouched. Gradients are expected to be
// clipped already. hyper.lr may be 0 for scheduled warmup steps.
void adamw_step(AdamWState& state, ParamMap& params, const GradMap& grads, const AdamWHyper& hyper);

}  // namespace ftlab
