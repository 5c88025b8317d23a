#pragma once

#include <optional>
#include <vector>

#include "stc/appearance.hpp"
#include "stc/association.hpp"
#include "stc/geometry.hpp"
#include "stc/motion.hpp"
#include "stc/trajectory.hpp"

namespace stc {

struct Detection {
  BBox box;
  double score = 1.0;
  std::optional<Embedding> embedding;
};

struct FrameInput {
  int frame = 0;
  std::vector<Detection> detections;
};

struct TrackerConfig {
  double tau_high = 0.3;
  double tau_low = 0.1;
  double gate_emb = 0.4;
  double gate_iou = 0.8;
  double match_thr_first = 0.9;
  double match_thr_second = 0.4;
  double match_thr_recover = 0.9;
  double ema_alpha = 0.9;
  int max_inactive_frames = 30;
  CostMode cost_mode = cost_mode::MinFusion{};
  OverlapMeasure overlap = OverlapMeasure::GIoU;
  double min_output_height = 0.0;
  double kalman_std_weight_position = 1.0 / 20.0;
  double kalman_std_weight_velocity = 1.0 / 160.0;

  /// Throws std::invalid_argument when a threshold is out of range.
  void validate() const;
  KalmanParams kalman_params() const;
  CostParams cost_params() const;
};

enum class TrackStatus { Active, Inactive, Removed };

struct TrackSample {
  int frame = 0;
  BBox box;
  double score = 0.0;
};

struct Track {
  int id = 0;
  KalmanState state;
  std::optional<TrackAppearance> appearance;
  TrackStatus status = TrackStatus::Active;
  int frames_since_update = 0;
  double last_score = 0.0;
  std::vector<TrackSample> history;
};

/// Which detections (indices into FrameInput::detections) an association
/// stage saw and which it consumed.
struct StageTrace {
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> matched;
  std::vector<int> matched_track_ids;
};

struct StepDiagnostics {
  int frame = 0;
  StageTrace first;
  StageTrace second;
  StageTrace recover;
  std::vector<int> born;
  std::vector<int> deactivated;
  std::vector<int> removed;
  int degenerate_ema = 0;
  int discarded_low = 0;
};

struct TrackerState {
  std::vector<Track> tracks;   // Active and Inactive, ascending id
  std::vector<Track> retired;  // Removed
  int next_id = 1;
  std::optional<int> last_frame;
  StepDiagnostics last_step;
};

struct TrackOutput {
  int id = 0;
  BBox box;
  double score = 0.0;
};

/// Advances the tracker by one frame:
///   1. predict every Active and Inactive track;
///   2. split detections into high (score >= tau_high) and low
///      (tau_low <= score < tau_high), dropping the rest;
///   3. Active x high, threshold match_thr_first;
///   4. leftover Active x low, threshold match_thr_second;
///   5. Inactive x leftover high, threshold match_thr_recover;
///   6. update matched tracks (appearance only from high detections);
///   7. unmatched Active tracks go Inactive, stale Inactive ones are Removed;
///   8. leftover high detections start new tracks;
///   9. emit Active tracks, ascending id.
/// Throws std::invalid_argument if `input.frame` does not exceed the previous
/// frame or a detection score is outside [0, 1].
std::vector<TrackOutput> step(TrackerState& state, const FrameInput& input,
                              const TrackerConfig& config);

/// Emitted history of every track, ascending id.
TrajectorySet finalize(const TrackerState& state);

/// Runs step() over all frames, then finalize().
TrajectorySet run_tracker(const std::vector<FrameInput>& frames, const TrackerConfig& config);

}  // namespace stc
