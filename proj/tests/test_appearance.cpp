#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stc/appearance.hpp"

using stc::Embedding;
using stc::TrackAppearance;

namespace {

Embedding emb(std::vector<double> v) { return Embedding(std::span<const double>(v)); }

Embedding random_embedding(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = n(rng);
  return Embedding(v);
}

double angle(const Embedding& a, const Embedding& b) {
  return std::acos(std::clamp(a.values().dot(b.values()), -1.0, 1.0));
}

}  // namespace

TEST(Embedding, Normalizes) {
  const auto e = emb({3, 4});
  EXPECT_DOUBLE_EQ(e.values()(0), 0.6);
  EXPECT_DOUBLE_EQ(e.values()(1), 0.8);
  EXPECT_EQ(e.dim(), 2);
}

TEST(Embedding, RejectsBadInput) {
  EXPECT_THROW(emb({}), std::invalid_argument);
  EXPECT_THROW(emb({0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(emb({1, NAN}), std::invalid_argument);
  EXPECT_THROW(emb({INFINITY, 1}), std::invalid_argument);
}

TEST(CosineDistance, Examples) {
  EXPECT_NEAR(stc::cosine_distance(emb({1, 2, 3}), emb({1, 2, 3})), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(stc::cosine_distance(emb({1, 0}), emb({0, 1})), 1.0);
  EXPECT_NEAR(stc::cosine_distance(emb({0.6, 0.8}), emb({0.8, 0.6})), 0.04, 1e-15);
  EXPECT_DOUBLE_EQ(stc::cosine_distance(emb({1, 0}), emb({-1, 0})), 2.0);
  EXPECT_THROW(stc::cosine_distance(emb({1, 0}), emb({1, 0, 0})), std::invalid_argument);
}

TEST(CosineDistance, RangeAndSymmetry) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_embedding(rng, 16);
    const auto b = random_embedding(rng, 16);
    const double d = stc::cosine_distance(a, b);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_DOUBLE_EQ(d, stc::cosine_distance(b, a));
  }
}

TEST(Ema, HandNormalizedBlend) {
  const auto r = stc::ema_update(TrackAppearance{emb({1, 0}), 0.9}, emb({0, 1}));
  EXPECT_FALSE(r.degenerate);
  const double n = std::sqrt(0.81 + 0.01);
  EXPECT_NEAR(r.appearance.ema.values()(0), 0.9 / n, 1e-15);
  EXPECT_NEAR(r.appearance.ema.values()(1), 0.1 / n, 1e-15);
  EXPECT_NEAR(r.appearance.ema.values()(0), 0.9939, 1e-4);
  EXPECT_NEAR(r.appearance.ema.values()(1), 0.1104, 1e-4);
  EXPECT_DOUBLE_EQ(r.appearance.momentum, 0.9);
}

TEST(Ema, ZeroMomentumTakesObservation) {
  const auto f = emb({0.3, -0.2, 0.9});
  const auto r = stc::ema_update(TrackAppearance{emb({1, 0, 0}), 0.0}, f);
  EXPECT_TRUE(r.appearance.ema.values().isApprox(f.values(), 1e-15));
}

TEST(Ema, FixedPointIsBitStable) {
  std::mt19937_64 rng(8);
  for (double m : {0.0, 0.5, 0.9, 0.99}) {
    for (int i = 0; i < 200; ++i) {
      const auto e = random_embedding(rng, 1 + i % 64);
      TrackAppearance app{e, m};
      for (int k = 0; k < 5; ++k) app = stc::ema_update(app, e).appearance;
      EXPECT_EQ(app.ema, e);
    }
  }
}

TEST(Ema, AntipodalHalfBlendKeepsPrevious) {
  const auto e = emb({1, 0});
  const auto r = stc::ema_update(TrackAppearance{e, 0.5}, emb({-1, 0}));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.appearance.ema, e);
}

TEST(Ema, ContractsTowardsFixedObservation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_embedding(rng, 32);
    TrackAppearance app{random_embedding(rng, 32), 0.9};
    double prev = angle(app.ema, f);
    for (int k = 0; k < 50; ++k) {
      app = stc::ema_update(app, f).appearance;
      const double a = angle(app.ema, f);
      EXPECT_LT(a, prev);
      EXPECT_NEAR(app.ema.values().norm(), 1.0, 1e-12);
      prev = a;
    }
  }
}
