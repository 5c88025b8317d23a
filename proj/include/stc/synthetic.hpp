#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stc/mot_io.hpp"
#include "stc/tracker.hpp"
#include "stc/trajectory.hpp"

namespace stc {

enum class SceneMotion { Linear, Crossing };

/// Scene parameters for generated sequences. Every identity walks its own
/// horizontal lane at constant velocity, except that with Crossing motion
/// identities 1 and 2 share a lane and swap x-positions over the sequence:
/// slow approach, a fast pass inside the crossing window, slow departure.
/// Their detections are missing inside the window.
struct SceneSpec {
  int identities = 5;
  int frames = 100;
  SceneMotion motion = SceneMotion::Linear;
  double box_width = 40.0;
  double box_height = 100.0;
  double speed = 1.0;            // px per frame
  double lane_spacing = 150.0;   // vertical distance between lanes
  double scene_width = 1920.0;
  int crossing_window_start = 16;
  int crossing_window_end = 25;
  double crossing_half_distance = 50.0;
  double position_noise = 0.0;   // px, std of center and size perturbation
  double dropout = 0.0;          // per-detection drop probability
  double score = 0.9;
  int embedding_dim = 32;
  double embedding_angle_deg = 90.0;  // mutual angle between identity vectors
  double embedding_noise = 0.0;       // per-component std before normalization

  /// Throws std::invalid_argument for an infeasible scene.
  void validate() const;
};

std::string serialize(const SceneSpec& spec);
/// Same "key = value" format as the tracker configuration. Throws DataError.
SceneSpec parse_scene_spec(std::string_view text);

struct SyntheticSequence {
  TrajectorySet gt;
  std::vector<FrameInput> frames;  // one per frame, including empty ones
  EmbeddingTable embeddings;       // keyed like the detection file
};

/// Deterministic for a given (spec, seed).
SyntheticSequence generate_synthetic(const SceneSpec& spec, std::uint64_t seed);

/// Writes det.txt, emb.bin and gt.txt into `dir` (created if needed).
void write_synthetic(const SyntheticSequence& seq, const std::filesystem::path& dir);

}  // namespace stc
