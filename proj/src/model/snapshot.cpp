#include "ftlab/model/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "ftlab/errors.hpp"

namespace ftlab {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

Snapshot::Snapshot(std::string label, ParamMap values) : label_(std::move(label)), values_(std::move(values)) {
  for (auto& [_, t] : values_) {
    t.clear_grad();
    t.set_requires_grad(false);
  }
}

const Tensor& Snapshot::at(const ComponentId& id) const {
  auto it = values_.find(id);
  if (it == values_.end()) throw ShapeError("snapshot '" + label_ + "' has no component '" + id.path() + "'");
  return it->second;
}

bool Snapshot::bit_equal(const Snapshot& other) const noexcept {
  if (values_.size() != other.values_.size()) return false;
  auto a = values_.begin();
  auto b = other.values_.begin();
  for (; a != values_.end(); ++a, ++b)
    if (!(a->first == b->first) || !a->second.bit_equal(b->second)) return false;
  return true;
}

Snapshot snapshot(const Model& model, std::string label) {
  ParamMap copy;
  for (const auto& [id, t] : model.params()) copy.emplace(id, t.detached());
  return Snapshot(std::move(label), std::move(copy));
}

void restore(Model& model, const Snapshot& snap, const LayerSelector& selector) {
  for (const auto& [id, t] : model.params()) {
    if (!selector.matches(id)) continue;
    const Tensor& src = snap.at(id);
    if (src.shape() != t.shape())
      throw ShapeError("restore: shape mismatch for '" + id.path() + "': " + shape_string(src.shape()) + " vs " +
                       shape_string(t.shape()));
  }
  for (auto& [id, t] : model.params()) {
    if (!selector.matches(id)) continue;
    const auto src = snap.at(id).data();
    std::copy(src.begin(), src.end(), t.data().begin());
  }
}

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'T', 'L', 'S', 'N', 'A', 'P', '\0'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ostream& os, const std::string& s) {
  put(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated snapshot file " + path.string());
  return v;
}

std::string get_string(std::istream& is, const std::filesystem::path& path) {
  const auto n = get<std::uint32_t>(is, path);
  if (n > (1u << 20)) throw IoError("corrupt string length in " + path.string());
  std::string s(n, '\0');
  if (!is.read(s.data(), n)) throw IoError("truncated snapshot file " + path.string());
  return s;
}

}  // namespace

void save_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put(os, kSnapshotFormatVersion);
  put_string(os, snap.label());
  put(os, static_cast<std::uint64_t>(snap.values().size()));
  for (const auto& [id, t] : snap.values()) {
    put_string(os, id.path());
    put(os, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) put(os, static_cast<std::uint64_t>(d));
    os.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.numel() * sizeof(double)));
  }
  if (!os) throw IoError("write failed for " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw IoError(path.string() + " is not a snapshot file");
  const auto version = get<std::uint32_t>(is, path);
  if (version != kSnapshotFormatVersion)
    throw IoError("unsupported snapshot format version " + std::to_string(version) + " in " + path.string());
  std::string label = get_string(is, path);
  const auto count = get<std::uint64_t>(is, path);
  ParamMap values;
  for (std::uint64_t i = 0; i < count; ++i) {
    ComponentId id(get_string(is, path));
    const auto rank = get<std::uint32_t>(is, path);
    if (rank == 0 || rank > 8) throw IoError("corrupt tensor rank in " + path.string());
    Shape shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(get<std::uint64_t>(is, path));
    std::vector<double> data(shape_numel(shape));
    if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double))))
      throw IoError("truncated snapshot file " + path.string());
    values.emplace(std::move(id), Tensor(std::move(shape), std::move(data)));
  }
  return Snapshot(std::move(label), std::move(values));
}

}  // namespace ftlab
