#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stc/trajectory.hpp"

namespace stc {

// Ratios use the max(1, denominator) convention, so empty inputs give 0
// rather than NaN.

struct ClearReport {
  double mota = 0.0;
  double motp = 0.0;           // mean IoU of matches, higher is better
  double motp_distance = 0.0;  // mean (1 - IoU) of matches
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long gt_count = 0;
  long matches = 0;
  double iou_sum = 0.0;
  long gt_tracks = 0;
  long mt = 0;  // GT trajectories matched in >= 80% of their frames
  long ml = 0;  // GT trajectories matched in <= 20% of their frames

  double mt_fraction() const;
  double ml_fraction() const;
};

/// Matched (gt id, pred id) pairs per frame.
using FrameMatches = std::map<int, std::vector<std::pair<int, int>>>;

/// CLEAR-MOT. Per frame, correspondences from the previous frame that still
/// overlap by at least `iou_threshold` are kept; the rest are matched by a
/// minimum (1 - IoU) assignment. Throws std::invalid_argument on duplicate
/// trajectory ids within one side.
ClearReport clear_mot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                      double iou_threshold = 0.5, FrameMatches* matches = nullptr);

struct IdReport {
  double idf1 = 0.0;
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
};

IdReport idf1(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
              double iou_threshold = 0.5);

struct HotaAlphaResult {
  double alpha = 0.0;
  double hota = 0.0;
  double det_a = 0.0;
  double ass_a = 0.0;
  long tp = 0;
  long fn = 0;
  long fp = 0;
  // Sum of A(c) over true positives c, and the summed association counts.
  double assoc_sum = 0.0;
  long tpa = 0;
  long fna = 0;
  long fpa = 0;
};

struct HotaReport {
  double hota = 0.0;  // mean over alphas
  std::vector<HotaAlphaResult> per_alpha;
};

/// 0.05, 0.10, ..., 0.95.
std::vector<double> default_hota_alphas();

HotaReport hota(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                std::span<const double> alphas);
HotaReport hota(std::span<const Trajectory> gt, std::span<const Trajectory> pred);

/// Ground truth after class filtering: scored pedestrian trajectories plus
/// per-frame boxes of distractor classes.
struct GroundTruth {
  TrajectorySet tracks;
  std::map<int, std::vector<BBox>> ignore_regions;
};

/// Drops predicted boxes that are matched (IoU >= threshold, assignment
/// against all GT boxes of the frame) to an ignore region.
TrajectorySet remove_ignored(const GroundTruth& gt, std::span<const Trajectory> pred,
                             double threshold = 0.5);

struct MetricsReport {
  std::string name;
  ClearReport clear;
  IdReport id;
  HotaReport hota;
};

MetricsReport evaluate(std::string name, std::span<const Trajectory> gt,
                       std::span<const Trajectory> pred, double iou_threshold = 0.5);

/// Sums integer components over sequences, then recomputes every ratio.
MetricsReport combine(std::span<const MetricsReport> reports, std::string name = "OVERALL");

/// Recomputes the ratio fields from the integer components.
void finish(ClearReport& r);
void finish(IdReport& r);
void finish(HotaReport& r);

}  // namespace stc
