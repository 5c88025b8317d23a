#pragma once

#include <functional>

#include "stc/trajectory.hpp"

namespace stc {

struct GsiConfig {
  double kernel_length_scale = 10.0;  // frames
  double observation_noise = 1e-2;    // relative to the signal scale
  int max_gap = 20;                   // frames

  void validate() const;
};

/// Gaussian-smoothed interpolation. For each trajectory and each of
/// (x_c, y_c, log w, log h), fits a least-squares line plus a zero-mean
/// squared-exponential Gaussian process over the observed frames, replaces the
/// observations with the posterior mean and fills gaps of at most `max_gap`
/// missing frames. Trajectories with fewer than two samples are returned
/// unchanged.
TrajectorySet gsi(const TrajectorySet& trajectories, const GsiConfig& config);

/// Connectivity score in [0, 1] for "`later` continues `earlier`".
using LinkScorer = std::function<double(const Trajectory& earlier, const Trajectory& later)>;

struct LinkConfig {
  double threshold = 0.5;
  int max_gap = 30;  // frames between the end of one and the start of the other

  void validate() const;
};

/// Greedy trajectory merging. Candidate pairs are (A, B) with
/// 1 <= B.first - A.last <= max_gap; pairs scoring above the threshold are
/// merged best-first, each trajectory gaining at most one successor and one
/// predecessor. B's boxes take A's id. Pairs whose merge would put two boxes
/// in one frame, or whose score is not a number in [0, 1], are skipped.
TrajectorySet link(const TrajectorySet& trajectories, const LinkScorer& scorer,
                   const LinkConfig& config);

/// Reference scorer, not a learned model: extrapolates A at constant velocity
/// to B's first frame and maps the center error, in units of A's last box
/// height, through exp(-error / tolerance).
LinkScorer motion_consistency_scorer(double tolerance = 0.5);

}  // namespace stc
