#include "ftlab/optim/adamw.hpp"

#include <cmath>

#include "ftlab/errors.hpp"

namespace ftlab {

void AdamWHyper::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw InvalidArgument("AdamW lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidArgument("AdamW beta1 must be in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidArgument("AdamW beta2 must be in [0,1)");
  if (!(eps > 0.0)) throw InvalidArgument("AdamW eps must be > 0");
  if (!(weight_decay >= 0.0)) throw InvalidArgument("AdamW weight_decay must be >= 0");
}

const MomentBuffers& AdamWState::moments(const ComponentId& id) const {
  auto it = moments_.find(id);
  if (it == moments_.end()) throw InvalidArgument("no optimizer state for '" + id.path() + "'");
  return it->second;
}

void AdamWState::reset() noexcept {
  moments_.clear();
  step_ = 0;
}

bool applies_weight_decay(const ComponentId& id) noexcept { return id.kind() == ParamKind::Weight; }

void adamw_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                  std::int64_t t, const AdamWHyper& hyper, bool decay) {
  if (grad.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size())
    throw ShapeError("adamw_update: parameter, gradient and moment lengths differ");
  if (t < 1) throw InvalidArgument("adamw_update: step must be >= 1");
  const double b1 = hyper.beta1, b2 = hyper.beta2;
  double c1 = 1.0, c2 = 1.0;
  if (hyper.bias_correction) {
    c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  }
  const double lambda = decay ? hyper.weight_decay : 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    m[i] = b1 * m[i] + (1.0 - b1) * g;
    v[i] = b2 * v[i] + (1.0 - b2) * g * g;
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    theta[i] -= hyper.lr * (mhat / (std::sqrt(vhat) + hyper.eps) + lambda * theta[i]);
  }
}

void adamw_step(AdamWState& state, ParamMap& params, const GradMap& grads, const AdamWHyper& hyper) {
  // A scheduled rate of exactly 0 (first warmup step) is allowed here.
  AdamWHyper check = hyper;
  if (check.lr == 0.0) check.lr = 1.0;
  check.validate();
  for (const auto& [id, g] : grads) {
    auto it = params.find(id);
    if (it == params.end()) throw ShapeError("adamw_step: gradient for unknown component '" + id.path() + "'");
    if (it->second.shape() != g.shape())
      throw ShapeError("adamw_step: gradient shape " + shape_string(g.shape()) + " does not match parameter '" +
                       id.path() + "' " + shape_string(it->second.shape()));
    if (auto st = state.moments_.find(id); st != state.moments_.end() && st->second.m.size() != g.numel())
      throw ShapeError("adamw_step: optimizer state shape mismatch for '" + id.path() + "'");
  }
  ++state.step_;
  for (const auto& [id, g] : grads) {
    Tensor& theta = params.at(id);
    auto [it, inserted] = state.moments_.try_emplace(id);
    MomentBuffers& mb = it->second;
    if (inserted) {
      mb.m.assign(g.numel(), 0.0);
      mb.v.assign(g.numel(), 0.0);
    }
    ++mb.step;
    adamw_update(theta.data(), g.data(), mb.m, mb.v, mb.step, hyper, applies_weight_decay(id));
    theta.check_finite("adamw_step '" + id.path() + "'");
  }
}

}  // namespace ftlab
