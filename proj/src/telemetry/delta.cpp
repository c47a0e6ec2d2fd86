#include "ftlab/telemetry/delta.hpp"

#include <algorithm>

#include "ftlab/errors.hpp"
#include "ftlab/numerics/vector_metrics.hpp"

namespace ftlab {

LayerDelta layer_delta(const Model& model, const Snapshot& reference, const LayerSelector& selector,
                       std::string label) {
  LayerDelta out;
  out.layer = std::move(label);
  bool any = false;
  for (const auto& [id, t] : model.params()) {
    if (!selector.matches(id)) continue;
    const Tensor& ref = reference.at(id);
    ComponentDelta cd{id, rmsd(t, ref), cosine_similarity(t, ref)};
    if (!any) {
      out.max_rmsd = cd.rmsd;
      out.min_cosine = cd.cosine;
      any = true;
    } else {
      out.max_rmsd = std::max(out.max_rmsd, cd.rmsd);
      out.min_cosine = std::min(out.min_cosine, cd.cosine);
    }
    out.components.push_back(std::move(cd));
  }
  if (!any) throw InvalidArgument("layer_delta: selector matches no component");
  return out;
}

std::vector<LayerDelta> all_layer_deltas(const Model& model, const Snapshot& reference) {
  std::vector<LayerDelta> out;
  out.push_back(layer_delta(model, reference, LayerSelector::scope(Scope::Embed), "embed"));
  for (int l = 1; l <= model.config().num_layers; ++l)
    out.push_back(layer_delta(model, reference, LayerSelector::layers(l, l), std::to_string(l)));
  out.push_back(layer_delta(model, reference, LayerSelector::scope(Scope::Head), "head"));
  return out;
}

}  // namespace ftlab
