#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ftlab/errors.hpp"
#include "ftlab/model/snapshot.hpp"
#include "support/generators.hpp"

namespace ftlab {
namespace {

namespace fs = std::filesystem;
using testing::tiny_model_config;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ftlab_snapshot_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(SnapshotTest, CapturesAllComponents) {
  const Model m = Model::build(tiny_model_config());
  const Snapshot s = snapshot(m, "init");
  EXPECT_EQ(s.label(), "init");
  EXPECT_EQ(s.values().size(), m.params().size());
  for (const auto& [id, t] : m.params()) EXPECT_TRUE(s.at(id).bit_equal(t));
  EXPECT_THROW(s.at(ComponentId("layer.9.ffn.w1.weight")), Error);
}

TEST(SnapshotTest, RestoreOnlyTouchesSelection) {
  Model m = Model::build(tiny_model_config());
  const Snapshot orig = snapshot(m, "orig");
  for (auto& [id, t] : m.params())
    for (double& v : t.data()) v += 1.0;
  const Snapshot moved = snapshot(m, "moved");
  restore(m, orig, LayerSelector::layers(2, 2));
  for (const auto& [id, t] : m.params()) {
    if (id.scope() == Scope::Layer && id.layer() == 2)
      EXPECT_TRUE(t.bit_equal(orig.at(id)));
    else
      EXPECT_TRUE(t.bit_equal(moved.at(id)));
  }
}

TEST(SnapshotTest, RestoreValidatesBeforeWriting) {
  Model small = Model::build(tiny_model_config(1));
  Model big = Model::build(tiny_model_config(2));
  const Snapshot s = snapshot(small, "small");
  const Snapshot before = snapshot(big, "before");
  EXPECT_THROW(restore(big, s, LayerSelector::all()), ShapeError);
  EXPECT_TRUE(snapshot(big, "after").bit_equal(before));
}

TEST(SnapshotTest, FileRoundTripIsBitExact) {
  Model m = Model::build(tiny_model_config());
  m.param(ComponentId("head.out.bias"))[0] = -0.0;
  m.param(ComponentId("head.out.bias"))[1] = 1.0 / 3.0;
  const Snapshot s = snapshot(m, "round trip");
  const fs::path p = temp_path("rt.snap");
  save_snapshot(s, p);
  const Snapshot back = load_snapshot(p);
  EXPECT_EQ(back.label(), "round trip");
  EXPECT_TRUE(back.bit_equal(s));
}

TEST(SnapshotTest, LoadRejectsCorruptFiles) {
  const fs::path p = temp_path("bad.snap");
  {
    std::ofstream os(p, std::ios::binary);
    os << "NOTASNAPSHOT";
  }
  EXPECT_THROW(load_snapshot(p), IoError);
  const Snapshot s = snapshot(Model::build(tiny_model_config()), "x");
  const fs::path q = temp_path("trunc.snap");
  save_snapshot(s, q);
  fs::resize_file(q, fs::file_size(q) / 2);
  EXPECT_THROW(load_snapshot(q), IoError);
  EXPECT_THROW(load_snapshot(temp_path("missing.snap")), IoError);
}

}  // namespace
}  // namespace ftlab
