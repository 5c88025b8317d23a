#include <gtest/gtest.h>

#include <variant>

#include "stc/config.hpp"
#include "stc/errors.hpp"
#include "stc/mot_io.hpp"

TEST(Config, DefaultsMatchGoldenFile) {
  const std::string golden = stc::read_text_file(STC_TEST_DATA_DIR "/default_config.golden");
  EXPECT_EQ(stc::serialize(stc::PipelineConfig{}), golden);
}

TEST(Config, RoundTrip) {
  stc::PipelineConfig c;
  c.tracker.tau_high = 0.4;
  c.tracker.cost_mode = stc::cost_mode::LambdaFused{0.25};
  c.tracker.overlap = stc::OverlapMeasure::IoU;
  c.tracker.max_inactive_frames = 12;
  c.gsi.max_gap = 7;
  c.link.threshold = 0.123456789;
  const auto text = stc::serialize(c);
  const auto back = stc::parse_config(text);
  EXPECT_EQ(stc::serialize(back), text);
  EXPECT_DOUBLE_EQ(back.link.threshold, 0.123456789);
  EXPECT_DOUBLE_EQ(std::get<stc::cost_mode::LambdaFused>(back.tracker.cost_mode).lambda, 0.25);
}

TEST(Config, PartialFileKeepsDefaults) {
  const auto c = stc::parse_config("# comment\n\ntau_high = 0.4   # MOT20\ncost_mode = iou\n");
  EXPECT_DOUBLE_EQ(c.tracker.tau_high, 0.4);
  EXPECT_TRUE(std::holds_alternative<stc::cost_mode::IoUOnly>(c.tracker.cost_mode));
  EXPECT_DOUBLE_EQ(c.tracker.tau_low, 0.1);
  EXPECT_EQ(c.gsi.max_gap, 20);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(stc::parse_config("tau_hi = 0.3\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("tau_high = 0.3\ntau_high = 0.4\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("tau_high 0.3\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("tau_high = high\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("tau_high = 1.3\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("tau_low = 0.5\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("max_inactive_frames = 2.5\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("cost_mode = sum\n"), stc::DataError);
  EXPECT_THROW(stc::parse_config("gsi_length_scale = 0\n"), stc::DataError);
}

TEST(Config, ShippedFilesLoad) {
  const auto mot17 = stc::load_config(STC_CONFIG_DIR "/mot17.cfg");
  const auto mot20 = stc::load_config(STC_CONFIG_DIR "/mot20.cfg");
  EXPECT_DOUBLE_EQ(mot17.tracker.tau_high, 0.3);
  EXPECT_DOUBLE_EQ(mot20.tracker.tau_high, 0.4);
  EXPECT_DOUBLE_EQ(mot20.tracker.match_thr_second, 0.4);
}
