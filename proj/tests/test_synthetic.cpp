#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "stc/errors.hpp"
#include "stc/mot_io.hpp"
#include "stc/plot.hpp"
#include "stc/synthetic.hpp"
#include "temp_dir.hpp"

using stc::SceneSpec;

TEST(Synthetic, NoiselessDetectionsEqualGroundTruth) {
  SceneSpec spec;
  const auto seq = stc::generate_synthetic(spec, 1);
  ASSERT_EQ(seq.gt.size(), 5u);
  ASSERT_EQ(seq.frames.size(), 100u);
  for (const auto& f : seq.frames) {
    ASSERT_EQ(f.detections.size(), 5u);
    for (const auto& d : f.detections) {
      const bool found = std::any_of(seq.gt.begin(), seq.gt.end(), [&](const stc::Trajectory& t) {
        return t.samples.at(f.frame).box == d.box;
      });
      EXPECT_TRUE(found);
      EXPECT_DOUBLE_EQ(d.score, spec.score);
    }
  }
}

TEST(Synthetic, FullDropoutLeavesEmptyFrames) {
  SceneSpec spec;
  spec.dropout = 1.0;
  const auto seq = stc::generate_synthetic(spec, 1);
  ASSERT_EQ(seq.frames.size(), 100u);
  for (const auto& f : seq.frames) EXPECT_TRUE(f.detections.empty());
  EXPECT_TRUE(seq.embeddings.records.empty());
  EXPECT_EQ(seq.gt[0].size(), 100u);
}

TEST(Synthetic, EmbeddingAngles) {
  for (double angle : {90.0, 30.0}) {
    SceneSpec spec;
    spec.identities = 4;
    spec.frames = 1;
    spec.embedding_angle_deg = angle;
    const auto seq = stc::generate_synthetic(spec, 2);
    const auto& d = seq.frames[0].detections;
    for (std::size_t a = 0; a < d.size(); ++a)
      for (std::size_t b = a + 1; b < d.size(); ++b)
        EXPECT_NEAR(d[a].embedding->values().dot(d[b].embedding->values()),
                    std::cos(angle * M_PI / 180.0), 1e-12);
  }
}

TEST(Synthetic, CrossingTrajectoriesIntersect) {
  SceneSpec spec;
  spec.identities = 2;
  spec.frames = 40;
  spec.motion = stc::SceneMotion::Crossing;
  const auto seq = stc::generate_synthetic(spec, 7);
  const auto& a = seq.gt[0].samples;
  const auto& b = seq.gt[1].samples;
  // Order along x flips between the first and the last frame.
  EXPECT_LT(a.at(1).box.center_x(), b.at(1).box.center_x());
  EXPECT_GT(a.at(40).box.center_x(), b.at(40).box.center_x());
  EXPECT_DOUBLE_EQ(a.at(1).box.center_y(), b.at(1).box.center_y());
  // Both identities are missing inside the window and only there.
  for (const auto& f : seq.frames) {
    const bool window = f.frame >= spec.crossing_window_start && f.frame <= spec.crossing_window_end;
    EXPECT_EQ(f.detections.size(), window ? 0u : 2u) << f.frame;
  }
}

TEST(Synthetic, SameSeedSameOutput) {
  SceneSpec spec;
  spec.position_noise = 2;
  spec.dropout = 0.2;
  spec.embedding_noise = 0.1;
  spec.embedding_angle_deg = 20;
  stc::testing::TempDir dir;
  stc::write_synthetic(stc::generate_synthetic(spec, 7), dir / "a");
  stc::write_synthetic(stc::generate_synthetic(spec, 7), dir / "b");
  stc::write_synthetic(stc::generate_synthetic(spec, 8), dir / "c");
  for (const char* f : {"det.txt", "emb.bin", "gt.txt"}) {
    EXPECT_EQ(stc::read_text_file(dir / "a" / f), stc::read_text_file(dir / "b" / f)) << f;
  }
  EXPECT_NE(stc::read_text_file(dir / "a" / "det.txt"), stc::read_text_file(dir / "c" / "det.txt"));
}

TEST(Synthetic, WrittenDatasetLoadsBack) {
  SceneSpec spec;
  spec.dropout = 0.1;
  stc::testing::TempDir dir;
  const auto seq = stc::generate_synthetic(spec, 4);
  stc::write_synthetic(seq, dir.path());
  const auto back = stc::load_sequence(dir / "det.txt", dir / "emb.bin", dir / "gt.txt");
  ASSERT_EQ(back.frames.size(), seq.frames.size());
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    ASSERT_EQ(back.frames[f].detections.size(), seq.frames[f].detections.size());
    for (std::size_t j = 0; j < seq.frames[f].detections.size(); ++j) {
      EXPECT_NEAR(back.frames[f].detections[j].embedding->values().dot(seq.frames[f].detections[j].embedding->values()),
                  1.0, 1e-6);
    }
  }
  EXPECT_EQ(back.gt->tracks.size(), 5u);
  EXPECT_EQ(back.stats.embeddings_rejected, 0u);
}

TEST(SceneSpec, SerializeParse) {
  SceneSpec spec;
  spec.motion = stc::SceneMotion::Crossing;
  spec.embedding_noise = 0.05;
  spec.identities = 3;
  const auto text = stc::serialize(spec);
  EXPECT_EQ(stc::serialize(stc::parse_scene_spec(text)), text);
  EXPECT_THROW(stc::parse_scene_spec("motion = spiral\n"), stc::DataError);
  EXPECT_THROW(stc::parse_scene_spec("identities = 1\nmotion = crossing\n"), stc::DataError);
  EXPECT_THROW(stc::parse_scene_spec("identities = 40\nembedding_dim = 8\n"), stc::DataError);
  EXPECT_THROW(stc::parse_scene_spec("color = red\n"), stc::DataError);
}

namespace {

// Longest and median center step between consecutive rows of one predicted
// id in the plot CSV.
std::pair<double, double> step_stats(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::map<int, std::vector<std::pair<double, double>>> tracks;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string f, id, x, y, status;
    std::getline(row, f, ',');
    std::getline(row, id, ',');
    std::getline(row, x, ',');
    std::getline(row, y, ',');
    std::getline(row, status, ',');
    if (status == "FN") continue;
    tracks[std::stoi(id)].emplace_back(std::stod(x), std::stod(y));
  }
  std::vector<double> steps;
  for (const auto& [id, pts] : tracks)
    for (std::size_t k = 1; k < pts.size(); ++k)
      steps.push_back(std::hypot(pts[k].first - pts[k - 1].first, pts[k].second - pts[k - 1].second));
  if (steps.empty()) return {0.0, 0.0};
  std::sort(steps.begin(), steps.end());
  return {steps.back(), steps[steps.size() / 2]};
}

}  // namespace

TEST(Plot, EmptyInputs) {
  const auto doc = stc::render_plot({}, {});
  EXPECT_NE(doc.svg.find("<svg"), std::string::npos);
  EXPECT_NE(doc.svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(doc.svg.find("<rect"), std::string::npos);
  EXPECT_EQ(doc.csv, "frame,id,x_c,y_c,status\n");
}

TEST(Plot, PerfectPredictionHasNoErrors) {
  const auto seq = stc::generate_synthetic(SceneSpec{}, 1);
  const auto doc = stc::render_plot(seq.gt, seq.gt);
  EXPECT_EQ(doc.svg.find("class=\"FN\""), std::string::npos);
  EXPECT_EQ(doc.svg.find("class=\"FP\""), std::string::npos);
  EXPECT_NE(doc.svg.find("id=\"frame-100\""), std::string::npos);
  EXPECT_NE(doc.svg.find("#ff8c00"), std::string::npos);
  const auto [longest, median] = step_stats(doc.csv);
  EXPECT_LE(longest, 5 * median);
}

TEST(Plot, SwapShowsAsJump) {
  SceneSpec spec;
  spec.identities = 2;
  spec.frames = 40;
  const auto seq = stc::generate_synthetic(spec, 1);
  auto pred = seq.gt;
  // Exchange the identities' boxes from frame 21 on.
  for (int f = 21; f <= 40; ++f) std::swap(pred[0].samples.at(f), pred[1].samples.at(f));
  const auto doc = stc::render_plot(seq.gt, pred);
  const auto [longest, median] = step_stats(doc.csv);
  EXPECT_GT(median, 0.0);
  EXPECT_GT(longest, 5 * median);

  stc::testing::TempDir dir;
  stc::emit_plot(seq.gt, pred, dir / "plot.svg");
  EXPECT_EQ(stc::read_text_file(dir / "plot.csv"), doc.csv);
  EXPECT_EQ(stc::read_text_file(dir / "plot.svg"), doc.svg);
}
