#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ftlab/errors.hpp"
#include "ftlab/telemetry/emit.hpp"
#include "support/generators.hpp"

namespace ftlab {
namespace {

namespace fs = std::filesystem;
using testing::Gen;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ftlab_emit_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

TEST(EmitTest, FormatDoubleRoundTrips) {
  Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = gen.vec(1)[0] * std::pow(10.0, gen.uniform(-200, 200));
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(parse_double("1e-12"), 1e-12);
  EXPECT_THROW(parse_double("abc"), IoError);
  EXPECT_THROW(parse_double("1.5x"), IoError);
}

TEST(EmitTest, StepsCsvRoundTrip) {
  Gen gen(2);
  std::vector<StepRecord> recs;
  for (int s = 0; s < 3; ++s) {
    StepRecord r{"cwgnc/cola_like/001", s == 2 ? 1 : 0, s, {}, gen.normal(), gen.uniform(0, 1e-3)};
    r.norms.push_back({ComponentId("layer.1.attn.key.weight"), gen.uniform(0, 5), gen.uniform(0, 0.05)});
    r.norms.push_back({ComponentId("head.out.bias"), gen.uniform(0, 5), gen.uniform(0, 0.05)});
    recs.push_back(r);
  }
  const fs::path p = temp_path("steps.csv");
  write_steps_csv(p, recs);
  const std::string text = slurp(p);
  EXPECT_EQ(text.substr(0, text.find('\n')), kStepsCsvHeader);
  const auto back = read_steps_csv(p);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].run_id, recs[i].run_id);
    EXPECT_EQ(back[i].iteration, recs[i].iteration);
    EXPECT_EQ(back[i].step, recs[i].step);
    EXPECT_EQ(back[i].loss, recs[i].loss);
    EXPECT_EQ(back[i].lr, recs[i].lr);
    ASSERT_EQ(back[i].norms.size(), 2u);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(back[i].norms[j].component, recs[i].norms[j].component);
      EXPECT_EQ(back[i].norms[j].pre_norm, recs[i].norms[j].pre_norm);
      EXPECT_EQ(back[i].norms[j].post_norm, recs[i].norms[j].post_norm);
    }
  }
}

TEST(EmitTest, DeltasCsvRoundTrip) {
  DeltaRecord d{"gu/rte_like/000", 2, DeltaReference::PreviousIteration, {}};
  LayerDelta l{"4", 0.25, 0.5, {}};
  l.components.push_back({ComponentId("layer.4.ffn.w1.weight"), 0.25, 0.75});
  l.components.push_back({ComponentId("layer.4.ffn.w1.bias"), 1.0 / 3.0, 0.5});
  d.layers.push_back(l);
  d.layers.push_back(LayerDelta{"head", 0.0, 1.0, {{ComponentId("head.out.weight"), 0.0, 1.0}}});
  const fs::path p = temp_path("deltas.csv");
  write_deltas_csv(p, std::vector<DeltaRecord>{d});
  const auto back = read_deltas_csv(p);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].run_id, d.run_id);
  EXPECT_EQ(back[0].iteration, 2);
  EXPECT_EQ(back[0].reference, DeltaReference::PreviousIteration);
  ASSERT_EQ(back[0].layers.size(), 2u);
  EXPECT_EQ(back[0].layers[0].layer, "4");
  EXPECT_EQ(back[0].layers[0].components[1].rmsd, 1.0 / 3.0);
  EXPECT_EQ(back[0].layers[1].min_cosine, 1.0);
}

TEST(EmitTest, RunsAndAggregatesJsonRoundTrip) {
  std::vector<RunResult> runs{{"a/t/000", "a", "t", 0xffffffffffffffffULL, Metric::F1, 0.8125, false, 0.8},
                              {"a/t/001", "a", "t", 3, Metric::F1, 0.1, true, 0.8}};
  const fs::path p = temp_path("runs.json");
  write_runs_json(p, runs);
  const auto back = read_runs_json(p);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].seed, runs[0].seed);
  EXPECT_EQ(back[1].failed, true);
  EXPECT_EQ(back[1].value, 0.1);
  EXPECT_EQ(back[0].metric, Metric::F1);

  std::vector<AggregateCell> cells{{"a", "t", Metric::Mcc, {25, 0.013, 0.731, 0.751, 0.04}}};
  const fs::path q = temp_path("aggregate.json");
  write_aggregates_json(q, cells);
  const auto cb = read_aggregates_json(q);
  ASSERT_EQ(cb.size(), 1u);
  EXPECT_EQ(cb[0].aggregate.n, 25u);
  EXPECT_EQ(cb[0].aggregate.std, 0.013);
  EXPECT_EQ(cb[0].aggregate.failed_fraction, 0.04);
  EXPECT_EQ(cb[0].metric, Metric::Mcc);
}

TEST(EmitTest, ReadErrorsCarryPath) {
  const fs::path p = temp_path("broken.csv");
  {
    std::ofstream os(p);
    os << "wrong,header\n";
  }
  try {
    read_steps_csv(p);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.csv"), std::string::npos);
  }
  EXPECT_THROW(read_runs_json(temp_path("nope.json")), IoError);
}

}  // namespace
}  // namespace ftlab
