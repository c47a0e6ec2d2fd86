#include <gtest/gtest.h>

#include "ftlab/errors.hpp"
#include "ftlab/telemetry/aggregate.hpp"
#include "ftlab/telemetry/delta.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace ftlab {
namespace {

using testing::Gen;

TEST(ClassifyRunTest, StrictlyBeatBaseline) {
  const MajorityBaseline acc{Metric::Accuracy, 0.65};
  EXPECT_EQ(classify_run(0.65, Metric::Accuracy, acc), RunOutcome::Failed);
  EXPECT_EQ(classify_run(0.64, Metric::Accuracy, acc), RunOutcome::Failed);
  EXPECT_EQ(classify_run(0.66, Metric::Accuracy, acc), RunOutcome::Success);
  const MajorityBaseline mcc{Metric::Mcc, 0.0};
  EXPECT_EQ(classify_run(0.0, Metric::Mcc, mcc), RunOutcome::Failed);
  EXPECT_EQ(classify_run(0.01, Metric::Mcc, mcc), RunOutcome::Success);
  EXPECT_THROW(classify_run(0.5, Metric::F1, acc), InvalidArgument);
}

TEST(AggregateTest, Examples) {
  const std::vector<double> v{0.1, 0.2, 0.3};
  const Aggregate a = aggregate_values(v);
  EXPECT_EQ(a.n, 3u);
  EXPECT_NEAR(a.mean, 0.2, 1e-15);
  EXPECT_NEAR(a.std, 0.1, 1e-15);
  EXPECT_EQ(a.max, 0.3);
  const std::vector<double> one{0.7};
  EXPECT_EQ(aggregate_values(one).std, 0.0);
  EXPECT_THROW(aggregate_values(std::vector<double>{}), InvalidArgument);
}

TEST(AggregateTest, ConstantValuesGiveZeroStd) {
  const std::vector<double> v(25, 0.1);
  const Aggregate a = aggregate_values(v);
  EXPECT_EQ(a.std, 0.0);
  EXPECT_EQ(a.mean, 0.1);
}

TEST(AggregateTest, MatchesOracleOnRandomInputs) {
  Gen gen(1);
  for (int i = 0; i < 100; ++i) {
    const auto v = gen.vec(gen.index(1, 60));
    const Aggregate a = aggregate_values(v);
    const auto o = testing::oracle_stats(v);
    const double scale = std::abs(o.mean) + o.std + 1e-300;
    EXPECT_NEAR(a.mean, o.mean, 1e-12 * scale);
    EXPECT_NEAR(a.std, o.std, 1e-12 * scale);
    EXPECT_EQ(a.max, o.max);
  }
}

TEST(AggregateTest, RunsCountFailures) {
  std::vector<RunResult> runs(4);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    runs[i].metric = Metric::Mcc;
    runs[i].value = 0.1 * static_cast<double>(i);
    runs[i].failed = i == 0;
  }
  const Aggregate a = aggregate_runs(runs);
  EXPECT_EQ(a.failed_fraction, 0.25);
  runs[2].metric = Metric::F1;
  EXPECT_THROW(aggregate_runs(runs), InvalidArgument);
}

TEST(TelemetrySinkTest, StrideAndOrdering) {
  TelemetrySink sink(TelemetryOptions{true, 3, false});
  EXPECT_TRUE(sink.wants_step(0));
  EXPECT_FALSE(sink.wants_step(1));
  EXPECT_TRUE(sink.wants_step(3));
  EXPECT_FALSE(sink.wants_deltas());
  sink.add_step(StepRecord{"a", -1, 3, {}, 0.0, 0.0});
  EXPECT_THROW(sink.add_step(StepRecord{"a", -1, 3, {}, 0.0, 0.0}), InvalidArgument);
  sink.add_step(StepRecord{"b", -1, 0, {}, 0.0, 0.0});
}

TEST(TelemetrySinkTest, MergeIsOrderIndependent) {
  auto make = [](const std::string& id) {
    TelemetrySink s;
    s.add_step(StepRecord{id, -1, 0, {}, 1.0, 0.0});
    s.add_step(StepRecord{id, -1, 1, {}, 2.0, 0.0});
    return s;
  };
  TelemetrySink x, y;
  x.merge(make("r/1"));
  x.merge(make("r/0"));
  y.merge(make("r/0"));
  y.merge(make("r/1"));
  ASSERT_EQ(x.steps().size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(x.steps()[i].run_id, y.steps()[i].run_id);
    EXPECT_EQ(x.steps()[i].step, y.steps()[i].step);
  }
  EXPECT_EQ(x.steps()[0].run_id, "r/0");
  EXPECT_EQ(x.steps()[1].step, 1);
}

TEST(DeltaTest, UntouchedLayersReportZeroAndOne) {
  Model m = Model::build(testing::tiny_model_config(3));
  const Snapshot ref = snapshot(m, "ref");
  for (double& v : m.param(ComponentId("layer.3.ffn.w2.weight")).data()) v *= 2.0;
  m.param(ComponentId("head.out.bias"))[0] = 0.5;
  const auto deltas = all_layer_deltas(m, ref);
  ASSERT_EQ(deltas.size(), 5u);
  EXPECT_EQ(deltas.front().layer, "embed");
  EXPECT_EQ(deltas.back().layer, "head");
  for (const auto& d : deltas) {
    if (d.layer == "3" || d.layer == "head") {
      EXPECT_GT(d.max_rmsd, 0.0);
    } else {
      EXPECT_EQ(d.max_rmsd, 0.0) << d.layer;
      EXPECT_EQ(d.min_cosine, 1.0) << d.layer;
    }
  }
  EXPECT_NEAR(deltas[3].min_cosine, 1.0, 1e-12);
  // The head bias starts at zero, so its cosine to the reference is 0.
  EXPECT_EQ(deltas.back().min_cosine, 0.0);
}

TEST(DeltaTest, LayerSummaryIsMaxAndMin) {
  Gen gen(5);
  Model m = Model::build(testing::tiny_model_config(1));
  const Snapshot ref = snapshot(m, "ref");
  for (auto& [id, t] : m.params())
    for (double& v : t.data()) v += gen.normal(0.01);
  const LayerDelta d = layer_delta(m, ref, LayerSelector::layers(1, 1), "1");
  ASSERT_EQ(d.components.size(), 16u);
  double mx = 0, mn = 1;
  for (const auto& c : d.components) {
    mx = std::max(mx, c.rmsd);
    mn = std::min(mn, c.cosine);
  }
  EXPECT_EQ(d.max_rmsd, mx);
  EXPECT_EQ(d.min_cosine, mn);
  EXPECT_THROW(layer_delta(m, ref, LayerSelector::layers(5, 5), "5"), InvalidArgument);
}

TEST(RecordsTest, NamesRoundTrip) {
  for (Metric m : {Metric::Accuracy, Metric::F1, Metric::Mcc}) EXPECT_EQ(parse_metric(metric_name(m)), m);
  EXPECT_THROW(parse_metric("auc"), InvalidArgument);
  for (auto r : {DeltaReference::Pretrained, DeltaReference::PreviousIteration})
    EXPECT_EQ(parse_reference(reference_name(r)), r);
  EXPECT_EQ(reference_name(DeltaReference::PreviousIteration), "previous_iteration");
}

}  // namespace
}  // namespace ftlab
