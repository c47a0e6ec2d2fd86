#pragma once

#include <string>
#include <vector>

#include "ftlab/model/snapshot.hpp"
#include "ftlab/telemetry/records.hpp"

namespace ftlab {

// RMSD and cosine similarity of every selected component against the
// reference, summarised as the max RMSD and min cosine over the selection.
// Throws ShapeError when the reference lacks a selected component and
// InvalidArgument when the selection is empty.
LayerDelta layer_delta(const Model& model, const Snapshot& reference, const LayerSelector& selector,
                       std::string label = {});

// One LayerDelta per group, ordered embed, 1..L, head.
std::vector<LayerDelta> all_layer_deltas(const Model& model, const Snapshot& reference);

}  // namespace ftlab
