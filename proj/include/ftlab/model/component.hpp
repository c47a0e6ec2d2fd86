#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "ftlab/numerics/tensor.hpp"

namespace ftlab {

enum class Scope { Embed, Layer, Head };
enum class ParamKind { Weight, Bias, Gain };

// Dot-separated parameter path such as "layer.3.attn.query.weight",
// "embed.token" or "head.out.bias". Layer indices are 1-based with 1 at the
// bottom of the stack. Construction validates the path.
class ComponentId {
 public:
  explicit ComponentId(std::string path);

  const std::string& path() const noexcept { return path_; }
  Scope scope() const noexcept { return scope_; }
  // 0 unless scope() == Scope::Layer.
  int layer() const noexcept { return layer_; }
  // Functional role without scope or kind, e.g. "attn.query", "ffn.w1", "token".
  const std::string& role() const noexcept { return role_; }
  ParamKind kind() const noexcept { return kind_; }

  friend bool operator==(const ComponentId& a, const ComponentId& b) noexcept { return a.path_ == b.path_; }
  friend std::strong_ordering operator<=>(const ComponentId& a, const ComponentId& b) noexcept {
    return a.path_ <=> b.path_;
  }

 private:
  std::string path_;
  Scope scope_ = Scope::Embed;
  int layer_ = 0;
  std::string role_;
  ParamKind kind_ = ParamKind::Weight;
};

using ComponentSet = std::set<ComponentId>;
// Iteration order is lexicographic by path.
using ParamMap = std::map<ComponentId, Tensor>;

// Delta tables and reports group components by these labels:
// "embed", "1".."L", "head".
std::string layer_label(const ComponentId& id);

// Which components a restore or delta measurement touches.
class LayerSelector {
 public:
  static LayerSelector all();
  // Inclusive 1-based layer range.
  static LayerSelector layers(int first, int last);
  static LayerSelector scope(Scope s);
  static LayerSelector components(ComponentSet ids);

  bool matches(const ComponentId& id) const;

 private:
  struct All {};
  struct Range {
    int first;
    int last;
  };
  std::variant<All, Range, Scope, ComponentSet> rule_;
};

}  // namespace ftlab
