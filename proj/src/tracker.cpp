#include "stc/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stc {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("TrackerConfig: ") + name + " must lie in [0, 1]");
  }
}

// Associates the given tracks with the given detections and records the
// outcome in `trace`. Returns (track index, detection index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> associate(
    const std::vector<Track>& tracks, const std::vector<std::size_t>& track_idx,
    const std::vector<Detection>& dets, const std::vector<std::size_t>& det_idx,
    const CostParams& params, double threshold, StageTrace& trace) {
  trace.candidates = det_idx;
  std::vector<AssociationCandidate> t_side;
  t_side.reserve(track_idx.size());
  for (std::size_t i : track_idx) {
    const Track& t = tracks[i];
    t_side.push_back({t.state.box(), t.appearance ? &t.appearance->ema : nullptr});
  }
  std::vector<AssociationCandidate> d_side;
  d_side.reserve(det_idx.size());
  for (std::size_t j : det_idx) {
    const Detection& d = dets[j];
    d_side.push_back({d.box, d.embedding ? &*d.embedding : nullptr});
  }
  const Assignment a = solve(build_cost(t_side, d_side, params), threshold);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto [r, c] : a.matches) {
    out.emplace_back(track_idx[r], det_idx[c]);
    trace.matched.push_back(det_idx[c]);
    trace.matched_track_ids.push_back(tracks[track_idx[r]].id);
  }
  return out;
}

std::vector<std::size_t> remove_used(const std::vector<std::size_t>& idx,
                                     const std::vector<char>& used) {
  std::vector<std::size_t> out;
  for (std::size_t i : idx) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

void TrackerConfig::validate() const {
  check_unit(tau_high, "tau_high");
  check_unit(tau_low, "tau_low");
  if (!(tau_low < tau_high)) throw std::invalid_argument("TrackerConfig: tau_low must be < tau_high");
  check_unit(gate_emb, "gate_emb");
  check_unit(gate_iou, "gate_iou");
  check_unit(match_thr_first, "match_thr_first");
  check_unit(match_thr_second, "match_thr_second");
  check_unit(match_thr_recover, "match_thr_recover");
  check_unit(ema_alpha, "ema_alpha");
  if (max_inactive_frames < 1) {
    throw std::invalid_argument("TrackerConfig: max_inactive_frames must be positive");
  }
  if (!(min_output_height >= 0.0) || !std::isfinite(min_output_height)) {
    throw std::invalid_argument("TrackerConfig: min_output_height must be >= 0");
  }
  if (!(kalman_std_weight_position >= 0.0) || !(kalman_std_weight_velocity >= 0.0)) {
    throw std::invalid_argument("TrackerConfig: Kalman weights must be >= 0");
  }
  if (const auto* fused = std::get_if<cost_mode::LambdaFused>(&cost_mode)) {
    check_unit(fused->lambda, "fused lambda");
  }
}

KalmanParams TrackerConfig::kalman_params() const {
  return KalmanParams::with_weights(kalman_std_weight_position, kalman_std_weight_velocity);
}

CostParams TrackerConfig::cost_params() const {
  return CostParams{cost_mode, gate_emb, gate_iou, overlap};
}

std::vector<TrackOutput> step(TrackerState& state, const FrameInput& input,
                              const TrackerConfig& config) {
  if (input.frame < 1) throw std::invalid_argument("step: frame numbers start at 1");
  if (state.last_frame) {
    if (input.frame == *state.last_frame) {
      throw std::invalid_argument("step: frame " + std::to_string(input.frame) +
                                  " already processed");
    }
    if (input.frame < *state.last_frame) {
      throw std::invalid_argument("step: frame " + std::to_string(input.frame) +
                                  " precedes frame " + std::to_string(*state.last_frame));
    }
  }
  for (const auto& d : input.detections) {
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw std::invalid_argument("step: detection score outside [0, 1]");
    }
  }
  state.last_frame = input.frame;
  StepDiagnostics diag;
  diag.frame = input.frame;

  const KalmanParams kalman = config.kalman_params();
  const CostParams cost = config.cost_params();
  auto& tracks = state.tracks;
  const auto& dets = input.detections;

  for (auto& t : tracks) t.state = predict(t.state, kalman);

  std::vector<std::size_t> high, low;
  for (std::size_t j = 0; j < dets.size(); ++j) {
    if (dets[j].score >= config.tau_high) {
      high.push_back(j);
    } else if (dets[j].score >= config.tau_low) {
      low.push_back(j);
    } else {
      ++diag.discarded_low;
    }
  }
  std::vector<std::size_t> active, inactive;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    (tracks[i].status == TrackStatus::Active ? active : inactive).push_back(i);
  }

  std::vector<char> det_used(dets.size(), 0);
  std::vector<char> track_matched(tracks.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  auto consume = [&](const std::vector<std::pair<std::size_t, std::size_t>>& stage) {
    for (auto [ti, dj] : stage) {
      det_used[dj] = 1;
      track_matched[ti] = 1;
      matches.emplace_back(ti, dj);
    }
  };

  consume(associate(tracks, active, dets, high, cost, config.match_thr_first, diag.first));
  consume(associate(tracks, remove_used(active, track_matched), dets, low, cost,
                    config.match_thr_second, diag.second));
  consume(associate(tracks, inactive, dets, remove_used(high, det_used), cost,
                    config.match_thr_recover, diag.recover));

  for (auto [ti, dj] : matches) {
    Track& t = tracks[ti];
    const Detection& d = dets[dj];
    t.state = update(t.state, to_measurement(d.box.to_center()), kalman);
    if (d.score >= config.tau_high && d.embedding) {
      if (t.appearance) {
        EmaResult r = ema_update(*t.appearance, *d.embedding);
        if (r.degenerate) ++diag.degenerate_ema;
        t.appearance = std::move(r.appearance);
      } else {
        t.appearance = TrackAppearance{*d.embedding, config.ema_alpha};
      }
    }
    t.status = TrackStatus::Active;
    t.frames_since_update = 0;
    t.last_score = d.score;
  }

  std::vector<Track> kept;
  kept.reserve(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    Track& t = tracks[i];
    if (!track_matched[i]) {
      ++t.frames_since_update;
      if (t.status == TrackStatus::Active) {
        t.status = TrackStatus::Inactive;
        diag.deactivated.push_back(t.id);
      }
      if (t.frames_since_update > config.max_inactive_frames) {
        t.status = TrackStatus::Removed;
        diag.removed.push_back(t.id);
        state.retired.push_back(std::move(t));
        continue;
      }
    }
    kept.push_back(std::move(t));
  }
  tracks = std::move(kept);

  for (std::size_t j : high) {
    if (det_used[j]) continue;
    const Detection& d = dets[j];
    Track t;
    t.id = state.next_id++;
    t.state = initiate(d.box.to_center(), kalman);
    if (d.embedding) t.appearance = TrackAppearance{*d.embedding, config.ema_alpha};
    t.last_score = d.score;
    diag.born.push_back(t.id);
    tracks.push_back(std::move(t));
  }

  std::vector<TrackOutput> out;
  for (auto& t : tracks) {
    if (t.status != TrackStatus::Active) continue;
    const BBox box = t.state.box();
    if (box.height() < config.min_output_height) continue;
    t.history.push_back({input.frame, box, t.last_score});
    out.push_back({t.id, box, t.last_score});
  }
  state.last_step = std::move(diag);
  return out;
}

TrajectorySet finalize(const TrackerState& state) {
  TrajectorySet out;
  auto collect = [&out](const Track& t) {
    if (t.history.empty()) return;
    Trajectory traj;
    traj.id = t.id;
    for (const auto& s : t.history) traj.samples.emplace(s.frame, TrajectorySample{s.box, s.score});
    out.push_back(std::move(traj));
  };
  for (const auto& t : state.tracks) collect(t);
  for (const auto& t : state.retired) collect(t);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

TrajectorySet run_tracker(const std::vector<FrameInput>& frames, const TrackerConfig& config) {
  config.validate();
  TrackerState state;
  for (const auto& f : frames) step(state, f, config);
  return finalize(state);
}

}  // namespace stc
