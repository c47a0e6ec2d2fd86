#include <gtest/gtest.h>

#include "ftlab/errors.hpp"
#include "ftlab/schedule/gradual_unfreezing.hpp"
#include "support/fixtures.hpp"

namespace ftlab {
namespace {

using testing::tiny_model_config;
using testing::tiny_options;
using testing::tiny_task;

TEST(GuTest, LayersPerIteration) {
  EXPECT_EQ(gu_layers(4, 0), (std::set<int>{4}));
  EXPECT_EQ(gu_layers(4, 2), (std::set<int>{2, 3, 4}));
  EXPECT_EQ(gu_layers(4, 3), (std::set<int>{1, 2, 3, 4}));
  EXPECT_THROW(gu_layers(4, 4), InvalidArgument);
}

TEST(GuTest, TrainableSetAddsHeadAndEmbed) {
  const Model m = Model::build(tiny_model_config(4));
  GUConfig cfg;
  const auto k0 = gu_trainable_set(m, cfg, 0);
  EXPECT_EQ(k0.size(), 16u + 2u);
  EXPECT_TRUE(k0.contains(ComponentId("head.out.weight")));
  EXPECT_FALSE(k0.contains(ComponentId("embed.token")));
  const auto k3 = gu_trainable_set(m, cfg, 3);
  EXPECT_EQ(k3, m.component_ids());
  cfg.include_embed_at_last = false;
  cfg.include_head_always = false;
  EXPECT_EQ(gu_trainable_set(m, cfg, 3).size(), 4u * 16u);
}

TEST(GuTest, ConfigValidation) {
  GUConfig cfg;
  EXPECT_EQ(cfg.iterations(4), 4);
  cfg.max_iterations = 2;
  EXPECT_EQ(cfg.iterations(4), 2);
  cfg.max_iterations = 5;
  EXPECT_THROW(cfg.validate(4), InvalidArgument);
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(4), InvalidArgument);
  cfg = GUConfig{};
  cfg.epochs_per_iteration = 0;
  EXPECT_THROW(cfg.validate(4), InvalidArgument);
}

class GuRunTest : public ::testing::TestWithParam<bool> {};

TEST_P(GuRunTest, LowerLayersFrozenEachIteration) {
  const bool restart = GetParam();
  Model m = Model::build(tiny_model_config(4));
  const Snapshot init = snapshot(m, "pretrained");
  GUConfig cfg;
  cfg.epochs_per_iteration = 1;
  cfg.restart = restart;
  TelemetrySink sink;
  RunContext ctx{"r", "gu", "tiny", 3, &sink, {}};
  const auto results = run_gradual_unfreezing(m, init, tiny_task(), cfg, tiny_options(), ctx);
  ASSERT_EQ(results.size(), 4u);

  // Telemetry: every step only reports the iteration's trainable set.
  for (const auto& s : sink.steps()) {
    const auto& it = results.at(static_cast<std::size_t>(s.iteration));
    EXPECT_EQ(s.norms.size(), it.trainable.size());
    for (const auto& n : s.norms) EXPECT_TRUE(it.trainable.contains(n.component));
  }
  // Deltas against the previous iteration: untouched layers are exactly (0, 1).
  for (const auto& d : sink.deltas()) {
    if (d.reference != DeltaReference::PreviousIteration) continue;
    const int k = d.iteration;
    for (const auto& layer : d.layers) {
      if (layer.layer == "head" || layer.layer == "embed") continue;
      const int l = std::stoi(layer.layer);
      if (l < 4 - k) {
        EXPECT_EQ(layer.max_rmsd, 0.0) << "k=" << k << " layer " << l;
        EXPECT_EQ(layer.min_cosine, 1.0);
      } else {
        EXPECT_GT(layer.max_rmsd, 0.0);
      }
    }
  }
  EXPECT_EQ(sink.deltas().size(), 8u);
}

INSTANTIATE_TEST_SUITE_P(Restart, GuRunTest, ::testing::Bool());

TEST(GuTest, RestartLastIterationEqualsFullFinetune) {
  const TaskData task = tiny_task();
  Model gu_model = Model::build(tiny_model_config(3));
  const Snapshot init = snapshot(gu_model, "pretrained");
  GUConfig cfg;
  cfg.epochs_per_iteration = 2;
  cfg.restart = true;
  std::vector<Snapshot> gu_states;
  RunContext gctx{"g", "gu_restart", "tiny", 17, nullptr, [&](const Model& m, std::int64_t) {
                    gu_states.push_back(snapshot(m, "s"));
                  }};
  const auto res = run_gradual_unfreezing(gu_model, init, task, cfg, tiny_options(), gctx);

  Model full = Model::build(tiny_model_config(3));
  std::vector<Snapshot> full_states;
  RunContext fctx{"f", "full", "tiny", 17, nullptr, [&](const Model& m, std::int64_t) {
                    full_states.push_back(snapshot(m, "s"));
                  }};
  const RunResult fr = run_full_finetune(full, init, task, 2, tiny_options(), fctx);

  const std::size_t n = full_states.size();
  ASSERT_GE(gu_states.size(), n);
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_TRUE(gu_states[gu_states.size() - n + i].bit_equal(full_states[i])) << "step " << i;
  EXPECT_EQ(res.back().value, fr.value);
}

}  // namespace
}  // namespace ftlab
