#pragma once

#include <map>
#include <string>

#include "ftlab/optim/adamw.hpp"

namespace ftlab {

// Zero-norm guard in the clip factor.
inline constexpr double kClipNormFloor = 1e-12;

struct ClipPolicy {
  enum class Kind { None, Global, ComponentWise };

  Kind kind = Kind::None;
  double tau = 1.0;
  // Per-component thresholds; component-wise only.
  std::map<ComponentId, double> overrides;

  static ClipPolicy none();
  static ClipPolicy global(double tau);
  static ClipPolicy component_wise(double tau, std::map<ComponentId, double> overrides = {});

  // Throws InvalidArgument for any non-positive threshold.
  void validate() const;
  double threshold_for(const ComponentId& id) const;
  std::string describe() const;
};

struct NormReport {
  double pre_norm = 0.0;
  double post_norm = 0.0;
};

struct ClipResult {
  GradMap grads;
  std::map<ComponentId, NormReport> report;
};

// Scales each gradient by min(1, tau / max(norm, 1e-12)). Component-wise
// uses each component's own L2 norm; global uses the norm of all gradients
// concatenated and one shared factor. Norms are reported for every policy.
// Throws NumericError naming the component on a non-finite gradient.
ClipResult clip_gradients(GradMap grads, const ClipPolicy& policy);

}  // namespace ftlab
