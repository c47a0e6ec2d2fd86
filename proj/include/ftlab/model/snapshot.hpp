#pragma once

#include <filesystem>
#include <string>

#include "ftlab/model/model.hpp"

namespace ftlab {

// Immutable value copy of every model parameter at a checkpoint.
class Snapshot {
 public:
  Snapshot(std::string label, ParamMap values);

  const std::string& label() const noexcept { return label_; }
  const ParamMap& values() const noexcept { return values_; }
  bool contains(const ComponentId& id) const { return values_.contains(id); }
  const Tensor& at(const ComponentId& id) const;

  // Same key set with bit-identical values; labels are ignored.
  bool bit_equal(const Snapshot& other) const noexcept;

 private:
  std::string label_;
  ParamMap values_;
};

Snapshot snapshot(const Model& model, std::string label);

// Overwrites the selected components with the snapshot's values, bit-exactly.
// Throws ShapeError if a selected component is missing from the snapshot or
// has a different shape; nothing is written in that case.
void restore(Model& model, const Snapshot& snap, const LayerSelector& selector);

// Binary file: magic "FTLSNAP\0", u32 format version, label, entry count, then
// per entry path, rank, dims and little-endian float64 data.
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;
void save_snapshot(const Snapshot& snap, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace ftlab
