#include "ftlab/optim/clip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ftlab/errors.hpp"
#include "ftlab/numerics/vector_metrics.hpp"

namespace ftlab {

ClipPolicy ClipPolicy::none() { return ClipPolicy{}; }

ClipPolicy ClipPolicy::global(double tau) {
  ClipPolicy p;
  p.kind = Kind::Global;
  p.tau = tau;
  p.validate();
  return p;
}

ClipPolicy ClipPolicy::component_wise(double tau, std::map<ComponentId, double> overrides) {
  ClipPolicy p;
  p.kind = Kind::ComponentWise;
  p.tau = tau;
  p.overrides = std::move(overrides);
  p.validate();
  return p;
}

void ClipPolicy::validate() const {
  if (kind == Kind::None) return;
  if (!(tau > 0.0)) throw InvalidArgument("clip threshold must be > 0");
  if (kind == Kind::Global && !overrides.empty())
    throw InvalidArgument("per-component thresholds require the component-wise policy");
  for (const auto& [id, t] : overrides)
    if (!(t > 0.0)) throw InvalidArgument("clip threshold for '" + id.path() + "' must be > 0");
}

double ClipPolicy::threshold_for(const ComponentId& id) const {
  if (auto it = overrides.find(id); it != overrides.end()) return it->second;
  return tau;
}

std::string ClipPolicy::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Global: os << "global(" << tau << ")"; break;
    case Kind::ComponentWise:
      os << "component_wise(" << tau;
      if (!overrides.empty()) os << ", " << overrides.size() << " overrides";
      os << ")";
      break;
  }
  return os.str();
}

namespace {

// Scales by min(1, tau / norm). Dividing by norm / tau keeps the result
// correctly rounded, so [3, 4] at tau = 1 becomes exactly [0.6, 0.8].
void clip_in_place(Tensor& t, double norm, double tau) {
  const double ratio = std::max(norm, kClipNormFloor) / tau;
  if (!(ratio > 1.0)) return;
  for (double& v : t.data()) v /= ratio;
}

}  // namespace

ClipResult clip_gradients(GradMap grads, const ClipPolicy& policy) {
  policy.validate();
  ClipResult out;
  for (const auto& [id, g] : grads) {
    if (!all_finite(g.data())) throw NumericError("non-finite gradient in component '" + id.path() + "'");
    out.report[id].pre_norm = l2_norm(g);
  }

  switch (policy.kind) {
    case ClipPolicy::Kind::None: break;
    case ClipPolicy::Kind::ComponentWise:
      for (auto& [id, g] : grads) clip_in_place(g, out.report[id].pre_norm, policy.threshold_for(id));
      break;
    case ClipPolicy::Kind::Global: {
      double ss = 0.0;
      for (const auto& [id, g] : grads)
        for (double v : g.data()) ss += v * v;
      const double norm = std::sqrt(ss);
      for (auto& [id, g] : grads) clip_in_place(g, norm, policy.tau);
      break;
    }
  }

  for (const auto& [id, g] : grads) out.report[id].post_norm = l2_norm(g);
  out.grads = std::move(grads);
  return out;
}

}  // namespace ftlab
