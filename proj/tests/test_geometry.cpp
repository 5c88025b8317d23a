#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "stc/geometry.hpp"

using stc::BBox;

TEST(BBox, RejectsDegenerateSizes) {
  EXPECT_THROW(BBox(0, 0, 0, 10), std::invalid_argument);
  EXPECT_THROW(BBox(0, 0, 10, -1), std::invalid_argument);
  EXPECT_THROW(BBox(0, 0, NAN, 10), std::invalid_argument);
  EXPECT_THROW(BBox(INFINITY, 0, 10, 10), std::invalid_argument);
  EXPECT_NO_THROW(BBox(-5, -5, 1e-3, 1e-3));
}

TEST(BBox, CenterForm) {
  const BBox b(10, 20, 30, 60);
  const auto c = b.to_center();
  EXPECT_DOUBLE_EQ(c.x_c, 25.0);
  EXPECT_DOUBLE_EQ(c.y_c, 50.0);
  EXPECT_DOUBLE_EQ(c.aspect, 0.5);
  EXPECT_DOUBLE_EQ(c.height, 60.0);
  const auto k = b.to_corners();
  EXPECT_DOUBLE_EQ(k.x2, 40.0);
  EXPECT_DOUBLE_EQ(k.y2, 80.0);
  EXPECT_EQ(BBox::from_corners(k), b);
}

TEST(BBox, CenterRoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-2000.0, 2000.0);
  std::uniform_real_distribution<double> size(0.5, 800.0);
  for (int i = 0; i < 1000; ++i) {
    const BBox b(pos(rng), pos(rng), size(rng), size(rng));
    const BBox r = BBox::from_center(b.to_center());
    const double scale = std::max({std::abs(b.left()), std::abs(b.top()), b.width(), b.height()});
    EXPECT_LE(std::abs(r.left() - b.left()), 1e-9 * scale);
    EXPECT_LE(std::abs(r.top() - b.top()), 1e-9 * scale);
    EXPECT_LE(std::abs(r.width() - b.width()), 1e-9 * b.width());
    EXPECT_LE(std::abs(r.height() - b.height()), 1e-9 * b.height());
  }
}

TEST(Iou, Examples) {
  const BBox a(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(stc::iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(stc::iou(a, BBox(20, 0, 10, 10)), 0.0);
  EXPECT_NEAR(stc::iou(a, BBox(5, 0, 10, 10)), 50.0 / 150.0, 1e-15);
  EXPECT_DOUBLE_EQ(stc::iou_distance(a, a), 0.0);
}

TEST(Giou, Examples) {
  const BBox a(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(stc::giou(a, a), 1.0);
  EXPECT_NEAR(stc::giou(a, BBox(10, 0, 10, 10)), 0.0, 1e-15);
  EXPECT_NEAR(stc::giou(a, BBox(20, 0, 10, 10)), -1.0 / 3.0, 1e-15);

  EXPECT_DOUBLE_EQ(stc::giou_distance(a, a), 0.0);
  EXPECT_NEAR(stc::giou_distance(a, BBox(10, 0, 10, 10)), 0.5, 1e-15);
  EXPECT_NEAR(stc::giou_distance(a, BBox(20, 0, 10, 10)), 2.0 / 3.0, 1e-15);
}

TEST(Giou, BoundedAndBelowIou) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 100.0);
  std::uniform_real_distribution<double> size(1.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const BBox a(pos(rng), pos(rng), size(rng), size(rng));
    const BBox b(pos(rng), pos(rng), size(rng), size(rng));
    const double u = stc::iou(a, b);
    const double g = stc::giou(a, b);
    EXPECT_GE(u, 0.0);
    EXPECT_LE(u, 1.0);
    EXPECT_GT(g, -1.0);
    EXPECT_LE(g, u + 1e-15);
    EXPECT_DOUBLE_EQ(u, stc::iou(b, a));
    EXPECT_NEAR(g, stc::giou(b, a), 1e-15);
    const double d = stc::giou_distance(a, b);
    EXPECT_GE(d, 0.0);
    EXPECT_LT(d, 1.0);
  }
}

TEST(Giou, DecreasesUnderTranslation) {
  const BBox a(0, 0, 10, 20);
  double prev = stc::giou(a, a);
  for (double dx = 0.5; dx < 2000.0; dx *= 1.3) {
    const double g = stc::giou(a, BBox(dx, 3.0, 10, 20));
    EXPECT_LT(g, prev) << "dx = " << dx;
    prev = g;
  }
  EXPECT_LT(prev, -0.98);
}
