#include <gtest/gtest.h>

#include "ftlab/errors.hpp"
#include "ftlab/model/component.hpp"

namespace ftlab {
namespace {

TEST(ComponentIdTest, ParsesLayerPaths) {
  const ComponentId id("layer.3.attn.query.weight");
  EXPECT_EQ(id.scope(), Scope::Layer);
  EXPECT_EQ(id.layer(), 3);
  EXPECT_EQ(id.role(), "attn.query");
  EXPECT_EQ(id.kind(), ParamKind::Weight);
  EXPECT_EQ(layer_label(id), "3");
}

TEST(ComponentIdTest, ParsesEmbedAndHead) {
  const ComponentId tok("embed.token");
  EXPECT_EQ(tok.scope(), Scope::Embed);
  EXPECT_EQ(tok.kind(), ParamKind::Weight);
  EXPECT_EQ(tok.layer(), 0);
  EXPECT_EQ(layer_label(tok), "embed");
  const ComponentId hb("head.out.bias");
  EXPECT_EQ(hb.scope(), Scope::Head);
  EXPECT_EQ(hb.kind(), ParamKind::Bias);
  EXPECT_EQ(layer_label(hb), "head");
  EXPECT_EQ(ComponentId("layer.1.ln1.gain").kind(), ParamKind::Gain);
}

TEST(ComponentIdTest, RejectsMalformedPaths) {
  for (const char* bad : {"", "layer", "layer.0.ffn.w1.weight", "layer.x.ffn.w1.weight", "layer.2.weight",
                          "head.out", "head.out.scale", "body.1.w.weight", "layer.-1.a.bias", "embed"}) {
    EXPECT_THROW(ComponentId{bad}, InvalidArgument) << bad;
  }
}

TEST(ComponentIdTest, OrdersByPath) {
  const ComponentId a("embed.token"), b("head.out.bias"), c("layer.1.ffn.w1.weight");
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_EQ(a, ComponentId("embed.token"));
}

TEST(LayerSelectorTest, Matches) {
  const ComponentId l1("layer.1.ffn.w1.bias"), l3("layer.3.ffn.w1.bias"), e("embed.position"), h("head.out.weight");
  EXPECT_TRUE(LayerSelector::all().matches(e));
  const auto range = LayerSelector::layers(2, 3);
  EXPECT_FALSE(range.matches(l1));
  EXPECT_TRUE(range.matches(l3));
  EXPECT_FALSE(range.matches(h));
  EXPECT_TRUE(LayerSelector::scope(Scope::Head).matches(h));
  EXPECT_FALSE(LayerSelector::scope(Scope::Head).matches(e));
  const auto set = LayerSelector::components({e});
  EXPECT_TRUE(set.matches(e));
  EXPECT_FALSE(set.matches(h));
}

}  // namespace
}  // namespace ftlab
