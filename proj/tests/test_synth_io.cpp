#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dlord/errors.hpp"
#include "dlord/motion_io.hpp"
#include "dlord/synth.hpp"

using namespace dlord;
using namespace dlord::motion;

namespace {

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("dlord_test_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("synthetic dataset covers the full label grid") {
  SynthConfig cfg;
  cfg.num_classes = 4;
  cfg.num_contents = 3;
  cfg.repetitions = 5;
  cfg.markers = 8;
  cfg.frames = 64;
  auto result = generate_synthetic(cfg, 42);
  CHECK(result.dataset.size() == 60);

  std::vector<std::vector<int>> cells(4, std::vector<int>(3, 0));
  for (std::size_t i = 0; i < result.dataset.size(); ++i)
    cells[static_cast<std::size_t>(result.dataset.class_labels[i])]
         [static_cast<std::size_t>(result.dataset.content_labels[i])]++;
  for (const auto& row : cells)
    for (int n : row) CHECK(n == 5);
}

TEST_CASE("same seed reproduces the dataset bit-exactly") {
  SynthConfig cfg;
  cfg.repetitions = 2;
  auto a = generate_synthetic(cfg, 7);
  auto b = generate_synthetic(cfg, 7);
  REQUIRE(a.dataset.size() == b.dataset.size());
  for (std::size_t i = 0; i < a.dataset.size(); ++i)
    CHECK(a.dataset.sequences[i].positions == b.dataset.sequences[i].positions);

  auto c = generate_synthetic(cfg, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.dataset.size() && !any_diff; ++i)
    any_diff = a.dataset.sequences[i].positions != c.dataset.sequences[i].positions;
  CHECK(any_diff);
}

TEST_CASE("bone lengths reflect class scales, not contents") {
  SynthConfig cfg;
  cfg.num_classes = 3;
  cfg.num_contents = 3;
  cfg.repetitions = 1;
  cfg.jitter = 0.0;  // isolate the class geometry
  auto result = generate_synthetic(cfg, 5);
  const auto& ds = result.dataset;

  // mean bone-length vector per sequence
  auto mean_lengths = [&](std::size_t i) {
    auto bl = bone_lengths(ds.sequences[i], ds.skeleton);
    std::vector<double> mean(static_cast<std::size_t>(bl.cols), 0.0);
    for (std::int64_t t = 0; t < bl.rows; ++t)
      for (std::int64_t b = 0; b < bl.cols; ++b) mean[static_cast<std::size_t>(b)] += bl.at(t, b);
    for (auto& v : mean) v /= static_cast<double>(bl.rows);
    return mean;
  };

  // same class, different contents: identical
  std::vector<std::size_t> class0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.class_labels[i] == 0) class0.push_back(i);
  REQUIRE(class0.size() == 3);
  auto ref = mean_lengths(class0[0]);
  for (std::size_t idx : class0) {
    auto m = mean_lengths(idx);
    for (std::size_t b = 0; b < m.size(); ++b) CHECK(std::fabs(m[b] - ref[b]) < 1e-9);
  }

  // across classes: scaled by the class ratio
  std::size_t i2 = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.class_labels[i] == 2 && ds.content_labels[i] == 0) i2 = i;
  auto m2 = mean_lengths(i2);
  const double ratio = result.truth.class_scales[2] / result.truth.class_scales[0];
  for (std::size_t b = 0; b < m2.size(); ++b)
    CHECK(m2[b] == doctest::Approx(ref[b] * ratio).epsilon(1e-9));
}

TEST_CASE("motion file round-trip is lossless") {
  SynthConfig cfg;
  cfg.num_classes = 1;
  cfg.num_contents = 1;
  cfg.repetitions = 1;
  cfg.frames = 16;
  auto result = generate_synthetic(cfg, 3);
  const auto& seq = result.dataset.sequences[0];

  auto dir = temp_dir("motion_roundtrip");
  auto path = dir / "seq.json";
  write_motion(path, seq, result.dataset.skeleton);
  auto mf = read_motion(path);

  CHECK(mf.sequence.id == seq.id);
  CHECK(mf.sequence.fps == seq.fps);
  CHECK(mf.sequence.marker_names == seq.marker_names);
  CHECK(mf.skeleton == result.dataset.skeleton);
  REQUIRE(mf.sequence.positions.size() == seq.positions.size());
  for (std::size_t i = 0; i < seq.positions.size(); ++i)
    CHECK(std::fabs(mf.sequence.positions[i] - seq.positions[i]) < 1e-12);
}

TEST_CASE("single-frame motion files are rejected") {
  auto dir = temp_dir("motion_t1");
  auto path = dir / "bad.json";
  std::ofstream out(path);
  out << R"({"version":1,"id":"x","fps":30.0,
       "marker_names":["a","b"],
       "skeleton":{"edges":[[0,1]],"root":0,"pelvis_pair":[0,1],"front_marker":1},
       "frames":[[[0,0,0],[1,0,0]]]})";
  out.close();
  CHECK_THROWS_AS(read_motion(path), SchemaError);
}

TEST_CASE("truncated frame row names the frame index") {
  auto dir = temp_dir("motion_truncated");
  auto path = dir / "bad.json";
  std::ofstream out(path);
  out << R"({"version":1,"id":"x","fps":30.0,
       "marker_names":["a","b"],
       "skeleton":{"edges":[[0,1]],"root":0,"pelvis_pair":[0,1],"front_marker":1},
       "frames":[[[0,0,0],[1,0,0]],[[0,0,0]]]})";
  out.close();
  try {
    read_motion(path);
    FAIL("expected ParseError");
  } catch (const ParseError& ex) {
    CHECK(std::string(ex.what()).find("frame 1") != std::string::npos);
  }
}

TEST_CASE("dataset round-trip through manifest") {
  SynthConfig cfg;
  cfg.num_classes = 2;
  cfg.num_contents = 2;
  cfg.repetitions = 2;
  cfg.frames = 8;
  auto result = generate_synthetic(cfg, 11);

  auto dir = temp_dir("dataset_roundtrip");
  write_dataset(dir, result.dataset);
  auto loaded = load_dataset(dir / "manifest.csv");

  CHECK(loaded.size() == result.dataset.size());
  CHECK(loaded.num_classes == 2);
  CHECK(loaded.num_contents == 2);
  CHECK(loaded.class_labels == result.dataset.class_labels);
  CHECK(loaded.content_labels == result.dataset.content_labels);
  CHECK(loaded.skeleton == result.dataset.skeleton);
  for (std::size_t i = 0; i < loaded.size(); ++i)
    CHECK(loaded.sequences[i].positions == result.dataset.sequences[i].positions);
}

TEST_CASE("normalization params round-trip") {
  auto dir = temp_dir("norm_roundtrip");
  NormalizationParams p;
  p.min_coord = {-1.25, 0.0, 0.125};
  p.max_coord = {3.5, 2.0, 1.75};
  write_normalization(dir / "norm.json", p);
  auto q = read_normalization(dir / "norm.json");
  CHECK(p == q);
}
