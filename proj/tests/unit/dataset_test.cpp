#include <gtest/gtest.h>

#include "ftlab/errors.hpp"
#include "ftlab/harness/dataset.hpp"
#include "ftlab/schedule/trainer.hpp"
#include "support/fixtures.hpp"

namespace ftlab::harness {
namespace {

using testing::tiny_model_config;

ModelConfig default_model() { return ModelConfig{}; }

std::size_t count_marker(const Example& ex, std::size_t marker) {
  std::size_t n = 0;
  for (auto t : ex.tokens) n += t == marker ? 1 : 0;
  return n;
}

TEST(DatasetTest, ExactSizesAndProportions) {
  TaskSpec s;
  s.num_train = 120;
  s.num_validation = 100;
  s.imbalance = 0.65;
  s.label_noise = 0.2;
  const TaskData d = gen_dataset(s, default_model());
  ASSERT_EQ(d.train.size(), 120u);
  ASSERT_EQ(d.validation.size(), 100u);
  EXPECT_EQ(class_counts(d.validation, 2), (std::vector<std::size_t>{65, 35}));
  EXPECT_EQ(class_counts(d.train, 2), (std::vector<std::size_t>{78, 42}));
  EXPECT_DOUBLE_EQ(majority_baseline(d).value, 0.65);
}

TEST(DatasetTest, NoiseFreeLabelsFollowTheCountRule) {
  TaskSpec s;
  s.num_classes = 3;
  s.imbalance = 0.5;
  s.distractor_rate = 0.9;
  s.marker_copies = 3;
  ModelConfig m = default_model();
  m.num_classes = 3;
  const TaskData d = gen_dataset(s, m);
  for (const auto& ex : d.train) {
    const std::size_t own = count_marker(ex, 1 + ex.label);
    EXPECT_EQ(own, 3u);
    for (std::size_t c = 0; c < 3; ++c)
      if (c != ex.label) EXPECT_LT(count_marker(ex, 1 + c), own);
  }
}

TEST(DatasetTest, NoisyExamplesCarryAnotherPattern) {
  TaskSpec s;
  s.num_train = 100;
  s.label_noise = 0.3;
  const TaskData d = gen_dataset(s, default_model());
  std::size_t noisy = 0;
  for (const auto& ex : d.train) noisy += count_marker(ex, 1 + ex.label) < static_cast<std::size_t>(s.marker_copies) ? 1 : 0;
  EXPECT_EQ(noisy, 30u);
}

TEST(DatasetTest, DeterministicPerSeed) {
  TaskSpec s;
  const TaskData a = gen_dataset(s, default_model());
  const TaskData b = gen_dataset(s, default_model());
  s.seed = 1;
  const TaskData c = gen_dataset(s, default_model());
  ASSERT_EQ(a.train.size(), b.train.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].tokens, b.train[i].tokens);
    EXPECT_EQ(a.train[i].label, b.train[i].label);
    differs = differs || a.train[i].tokens != c.train[i].tokens;
  }
  EXPECT_TRUE(differs);
}

TEST(DatasetTest, TokensInVocabularyAndFixedLength) {
  const TaskData d = gen_dataset(testing::tiny_task_spec(), tiny_model_config());
  for (const auto& ex : d.train) {
    EXPECT_EQ(ex.tokens.size(), 6u);
    for (auto t : ex.tokens) {
      EXPECT_GE(t, 1u);
      EXPECT_LT(t, 16u);
    }
  }
}

TEST(DatasetTest, RejectsInconsistentSpecs) {
  const ModelConfig m = default_model();
  auto bad = [&](auto mutate) {
    TaskSpec s;
    mutate(s);
    EXPECT_THROW(gen_dataset(s, m), InvalidArgument);
  };
  bad([](TaskSpec& s) { s.num_train = 0; });
  bad([](TaskSpec& s) { s.imbalance = 1.0; });
  bad([](TaskSpec& s) { s.imbalance = 0.4; });
  bad([](TaskSpec& s) { s.label_noise = 0.5; });
  bad([](TaskSpec& s) { s.num_classes = 3; });
  bad([](TaskSpec& s) { s.seq_length = 17; });
  bad([](TaskSpec& s) { s.marker_copies = 0; });
  bad([](TaskSpec& s) { s.majority_label = 2; });
}

}  // namespace
}  // namespace ftlab::harness
