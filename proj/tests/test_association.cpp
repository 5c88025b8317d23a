#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "assignment_oracle.hpp"
#include "stc/association.hpp"

using stc::AssociationCandidate;
using stc::BBox;
using stc::CostMatrix;
using stc::CostParams;
using stc::Embedding;

namespace {

Embedding unit2(double x) { return Embedding(Eigen::Vector2d(x, std::sqrt(1.0 - x * x))); }

double single_cost(const BBox& t, const Embedding* te, const BBox& d, const Embedding* de,
                   const CostParams& p) {
  const AssociationCandidate tc{t, te};
  const AssociationCandidate dc{d, de};
  const auto c = stc::build_cost(std::span(&tc, 1), std::span(&dc, 1), p);
  return c(0, 0);
}

CostParams iou_params(stc::CostMode mode) {
  CostParams p;
  p.mode = mode;
  p.overlap = stc::OverlapMeasure::IoU;
  return p;
}

const BBox kRef(0, 0, 10, 10);

}  // namespace

TEST(CostMode, ParseAndPrint) {
  for (const char* s : {"min", "iou", "emb", "fused:0.5", "fused:0.25", "fused:1"}) {
    EXPECT_EQ(stc::to_string(stc::parse_cost_mode(s)), s);
  }
  EXPECT_THROW(stc::parse_cost_mode("fused:1.5"), std::invalid_argument);
  EXPECT_THROW(stc::parse_cost_mode("fused:"), std::invalid_argument);
  EXPECT_THROW(stc::parse_cost_mode("both"), std::invalid_argument);
  EXPECT_EQ(stc::parse_overlap_measure("giou"), stc::OverlapMeasure::GIoU);
  EXPECT_THROW(stc::parse_overlap_measure("diou"), std::invalid_argument);
}

TEST(BuildCost, GatedAppearanceFallsBackToOverlap) {
  // d_iou = 0.2 (IoU 0.8), d_cos = 0.5 fails the 0.4 gate.
  const auto e = unit2(1.0), f = unit2(0.5);
  const double c = single_cost(kRef, &e, BBox(0, 0, 8, 10), &f, iou_params(stc::cost_mode::MinFusion{}));
  EXPECT_NEAR(c, 0.2, 1e-12);
}

TEST(BuildCost, PassingGatesTakeMinimum) {
  // d_iou = 0.3, d_cos = 0.1.
  const auto e = unit2(1.0), f = unit2(0.9);
  const double c = single_cost(kRef, &e, BBox(0, 0, 7, 10), &f, iou_params(stc::cost_mode::MinFusion{}));
  EXPECT_NEAR(c, 0.1, 1e-12);
}

TEST(BuildCost, OverlapGateBlocksAppearance) {
  // d_iou = 0.85 > 0.8: appearance ignored even though it matches perfectly.
  const auto e = unit2(1.0);
  const double c = single_cost(kRef, &e, BBox(0, 0, 1.5, 10), &e, iou_params(stc::cost_mode::MinFusion{}));
  EXPECT_NEAR(c, 0.85, 1e-12);
}

TEST(BuildCost, LambdaFusedMean) {
  // d_emb = 0.2, d_iou = 0.4.
  const auto e = unit2(1.0), f = unit2(0.8);
  const double c =
      single_cost(kRef, &e, BBox(0, 0, 6, 10), &f, iou_params(stc::cost_mode::LambdaFused{0.5}));
  EXPECT_NEAR(c, 0.3, 1e-12);
}

TEST(BuildCost, SingleSourceModes) {
  const auto e = unit2(1.0), f = unit2(0.8);
  const BBox d(0, 0, 6, 10);
  EXPECT_NEAR(single_cost(kRef, &e, d, &f, iou_params(stc::cost_mode::IoUOnly{})), 0.4, 1e-12);
  EXPECT_NEAR(single_cost(kRef, &e, d, &f, iou_params(stc::cost_mode::EmbeddingOnly{})), 0.2, 1e-12);
  // Missing embedding on either side: overlap distance in every mode.
  for (auto mode : {stc::CostMode{stc::cost_mode::EmbeddingOnly{}},
                    stc::CostMode{stc::cost_mode::LambdaFused{0.5}},
                    stc::CostMode{stc::cost_mode::MinFusion{}}}) {
    EXPECT_NEAR(single_cost(kRef, nullptr, d, &f, iou_params(mode)), 0.4, 1e-12);
    EXPECT_NEAR(single_cost(kRef, &e, d, nullptr, iou_params(mode)), 0.4, 1e-12);
  }
}

TEST(BuildCost, DisjointIsInfeasibleUnderIou) {
  const auto e = unit2(1.0);
  const double c = single_cost(kRef, &e, BBox(50, 0, 10, 10), &e, iou_params(stc::cost_mode::EmbeddingOnly{}));
  EXPECT_FALSE(CostMatrix::feasible(c));
  // GIoU distance stays below one for disjoint boxes.
  CostParams g;
  EXPECT_NEAR(single_cost(kRef, &e, BBox(20, 0, 10, 10), nullptr, g), 2.0 / 3.0, 1e-12);
}

TEST(BuildCost, EmptySides) {
  std::vector<AssociationCandidate> none;
  std::vector<AssociationCandidate> one{{kRef, nullptr}};
  EXPECT_TRUE(stc::build_cost(none, one, CostParams{}).empty());
  EXPECT_EQ(stc::build_cost(one, none, CostParams{}).rows(), 1u);
  const auto a = stc::solve(stc::build_cost(one, none, CostParams{}), 0.9);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_rows, std::vector<std::size_t>{0});
}

TEST(BuildCost, MinFusionNeverExceedsOverlap) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(0, 40), size(5, 30), comp(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Embedding> embs;
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXd v(4);
      for (int i = 0; i < 4; ++i) v(i) = comp(rng);
      embs.emplace_back(v);
    }
    std::vector<AssociationCandidate> t, d;
    for (int k = 0; k < 4; ++k) t.push_back({BBox(pos(rng), pos(rng), size(rng), size(rng)), &embs[k]});
    for (int k = 4; k < 8; ++k) d.push_back({BBox(pos(rng), pos(rng), size(rng), size(rng)), &embs[k]});
    CostParams pm, pi;
    pi.mode = stc::cost_mode::IoUOnly{};
    const auto cm = stc::build_cost(t, d, pm);
    const auto ci = stc::build_cost(t, d, pi);
    // Loosening the appearance gate can only lower costs.
    CostParams loose = pm;
    loose.gate_emb = 0.8;
    const auto cl = stc::build_cost(t, d, loose);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_LE(cm(i, j), ci(i, j));
        EXPECT_LE(cl(i, j), cm(i, j));
        EXPECT_GE(cm(i, j), 0.0);
        EXPECT_LE(cm(i, j), 1.0);
      }
    }
  }
}

TEST(Solve, Examples) {
  CostMatrix one(1, 1, 0.1);
  auto a = stc::solve(one, 0.9);
  ASSERT_EQ(a.matches.size(), 1u);
  EXPECT_EQ(a.matches[0], std::make_pair(std::size_t{0}, std::size_t{0}));

  CostMatrix two(2, 2);
  two(0, 0) = 0.1;
  two(0, 1) = 0.9;
  two(1, 0) = 0.9;
  two(1, 1) = 0.1;
  a = stc::solve(two, 0.9);
  ASSERT_EQ(a.matches.size(), 2u);
  EXPECT_EQ(a.matches[0].second, 0u);
  EXPECT_EQ(a.matches[1].second, 1u);

  CostMatrix high(1, 1, 0.95);
  a = stc::solve(high, 0.9);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_rows, std::vector<std::size_t>{0});
  EXPECT_EQ(a.unmatched_cols, std::vector<std::size_t>{0});
}

TEST(Solve, ThresholdAppliedAfterAssignment) {
  // Optimal pairing is (0,1),(1,0) at 1.0 against 1.04 for the diagonal; the
  // threshold does not make the solver prefer the cheaper single pair (0,0).
  CostMatrix c(2, 2);
  c(0, 0) = 0.05;
  c(0, 1) = 0.5;
  c(1, 0) = 0.5;
  c(1, 1) = 0.99;
  const auto a = stc::solve(c, 0.4);
  EXPECT_TRUE(a.matches.empty());
  EXPECT_EQ(a.unmatched_rows.size(), 2u);
}

TEST(LinearAssignment, MatchesBruteForceDense) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = stc::testing::random_cost(rng, 6, 0.0);
    const auto got = stc::testing::evaluate_assignment(c, stc::linear_assignment(c));
    const auto want = stc::testing::brute_force_assignment(c);
    ASSERT_EQ(got.pairs, std::min(c.rows(), c.cols()));
    ASSERT_NEAR(got.cost, want.cost, 1e-12) << c.rows() << "x" << c.cols();
  }
}

TEST(LinearAssignment, MatchesBruteForceWithInfeasible) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = stc::testing::random_cost(rng, 6, 0.4);
    const auto rows = stc::linear_assignment(c);
    const auto got = stc::testing::evaluate_assignment(c, rows);
    const auto want = stc::testing::brute_force_assignment(c);
    ASSERT_EQ(got.pairs, want.pairs);
    ASSERT_NEAR(got.cost, want.cost, 1e-12);
    std::set<std::size_t> cols;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r]) continue;
      ASSERT_TRUE(CostMatrix::feasible(c(r, *rows[r])));
      ASSERT_TRUE(cols.insert(*rows[r]).second);
    }
  }
}

TEST(Solve, PartitionIsComplete) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = stc::testing::random_cost(rng, 7, 0.3);
    const auto a = stc::solve(c, 0.5);
    std::set<std::size_t> rows(a.unmatched_rows.begin(), a.unmatched_rows.end());
    std::set<std::size_t> cols(a.unmatched_cols.begin(), a.unmatched_cols.end());
    for (auto [r, col] : a.matches) {
      EXPECT_LE(c(r, col), 0.5);
      EXPECT_TRUE(rows.insert(r).second);
      EXPECT_TRUE(cols.insert(col).second);
    }
    EXPECT_EQ(rows.size(), c.rows());
    EXPECT_EQ(cols.size(), c.cols());
  }
}

TEST(LinearAssignment, AllInfeasible) {
  CostMatrix c(3, 2, CostMatrix::kInfeasible);
  for (const auto& r : stc::linear_assignment(c)) EXPECT_FALSE(r.has_value());
}
