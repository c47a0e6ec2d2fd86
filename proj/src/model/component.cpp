#include "ftlab/model/component.hpp"

#include <charconv>
#include <vector>

#include "ftlab/errors.hpp"

namespace ftlab {

namespace {

std::vector<std::string_view> split_dots(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = s.find('.', start);
    out.push_back(s.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

bool parse_kind(std::string_view s, ParamKind& kind) {
  if (s == "weight") kind = ParamKind::Weight;
  else if (s == "bias") kind = ParamKind::Bias;
  else if (s == "gain") kind = ParamKind::Gain;
  else return false;
  return true;
}

std::string join(const std::vector<std::string_view>& parts, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += '.';
    out += parts[i];
  }
  return out;
}

}  // namespace

ComponentId::ComponentId(std::string path) : path_(std::move(path)) {
  const auto parts = split_dots(path_);
  for (auto p : parts)
    if (p.empty()) throw InvalidArgument("component path has an empty segment: '" + path_ + "'");
  auto bad = [&](const char* why) { return InvalidArgument("invalid component path '" + path_ + "': " + why); };

  if (parts[0] == "embed") {
    if (parts.size() != 2) throw bad("expected embed.<role>");
    scope_ = Scope::Embed;
    role_ = std::string(parts[1]);
    kind_ = ParamKind::Weight;
  } else if (parts[0] == "head") {
    if (parts.size() < 3 || !parse_kind(parts.back(), kind_)) throw bad("expected head.<role>.<kind>");
    scope_ = Scope::Head;
    role_ = join(parts, 1, parts.size() - 1);
  } else if (parts[0] == "layer") {
    if (parts.size() < 4 || !parse_kind(parts.back(), kind_)) throw bad("expected layer.<i>.<role>.<kind>");
    int idx = 0;
    const auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), idx);
    if (ec != std::errc() || ptr != parts[1].data() + parts[1].size() || idx < 1) throw bad("layer index must be >= 1");
    scope_ = Scope::Layer;
    layer_ = idx;
    role_ = join(parts, 2, parts.size() - 1);
  } else {
    throw bad("scope must be embed, layer or head");
  }
}

std::string layer_label(const ComponentId& id) {
  switch (id.scope()) {
    case Scope::Embed: return "embed";
    case Scope::Head: return "head";
    case Scope::Layer: return std::to_string(id.layer());
  }
  return {};
}

LayerSelector LayerSelector::all() {
  LayerSelector s;
  s.rule_ = All{};
  return s;
}

LayerSelector LayerSelector::layers(int first, int last) {
  if (first < 1 || last < first) throw InvalidArgument("layer range must satisfy 1 <= first <= last");
  LayerSelector s;
  s.rule_ = Range{first, last};
  return s;
}

LayerSelector LayerSelector::scope(Scope sc) {
  LayerSelector s;
  s.rule_ = sc;
  return s;
}

LayerSelector LayerSelector::components(ComponentSet ids) {
  LayerSelector s;
  s.rule_ = std::move(ids);
  return s;
}

bool LayerSelector::matches(const ComponentId& id) const {
  if (std::holds_alternative<All>(rule_)) return true;
  if (const auto* r = std::get_if<Range>(&rule_))
    return id.scope() == Scope::Layer && id.layer() >= r->first && id.layer() <= r->last;
  if (const auto* sc = std::get_if<Scope>(&rule_)) return id.scope() == *sc;
  return std::get<ComponentSet>(rule_).contains(id);
}

}  // namespace ftlab
