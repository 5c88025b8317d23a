#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stc/metrics.hpp"
#include "stc/tracker.hpp"
#include "stc/trajectory.hpp"

namespace stc {

struct LoadStats {
  std::size_t rows = 0;
  std::size_t malformed = 0;
  std::size_t invalid_boxes = 0;  // zero or negative width/height, dropped
  std::size_t embeddings_joined = 0;
  std::size_t embeddings_rejected = 0;
};

/// A detection row keeps its position among the rows of its frame (file
/// order), which is the key embedding records join on.
struct DetectionRow {
  int frame = 0;
  int index_in_frame = 0;
  BBox box;
  double score = 0.0;
};

struct EmbeddingRecord {
  std::uint32_t frame = 0;
  std::uint32_t index = 0;
  std::vector<float> values;
};

struct EmbeddingTable {
  std::uint32_t dim = 0;
  std::vector<EmbeddingRecord> records;
};

/// Parses one "frame,id,left,top,width,height,conf[,...]" row. Returns
/// nullopt for malformed rows; throws std::invalid_argument for rows that
/// parse but carry a non-positive width or height.
std::optional<DetectionRow> parse_detection_row(std::string_view line);

std::vector<DetectionRow> read_detections(const std::filesystem::path& path, LoadStats& stats);

/// Reads either the binary form (magic "EMB1", u32 LE dimension, u32 LE
/// count, then per record u32 frame, u32 index and dim x f32 LE) or the text
/// form (header "frame,index,e0,...", one record per row).
EmbeddingTable read_embeddings(const std::filesystem::path& path);
void write_embeddings_binary(const std::filesystem::path& path, const EmbeddingTable& table);
void write_embeddings_text(const std::filesystem::path& path, const EmbeddingTable& table);

/// MOT17/MOT20 ground truth: class 1 rows with the active flag set become
/// trajectories; distractor classes (2, 7, 8, 12) become ignore regions.
GroundTruth read_ground_truth(const std::filesystem::path& path, LoadStats& stats);

/// Tracker result file ("frame,id,left,top,width,height,score,...").
TrajectorySet read_results(const std::filesystem::path& path);

struct Sequence {
  std::vector<FrameInput> frames;
  std::optional<GroundTruth> gt;
  LoadStats stats;
  std::uint32_t embedding_dim = 0;
};

/// Groups detections by frame (ascending, gaps become empty frames so frame
/// numbers stay consecutive) and joins L2-normalized embeddings by
/// (frame, index). Throws DataError when more than 1% of rows are malformed.
Sequence load_sequence(const std::filesystem::path& det_path,
                       const std::optional<std::filesystem::path>& emb_path,
                       const std::optional<std::filesystem::path>& gt_path);

/// "frame,id,left,top,width,height,score,-1,-1,-1" rows, frame then id
/// ascending, two decimals.
std::string format_results(const TrajectorySet& trajectories);
void write_results(const TrajectorySet& trajectories, const std::filesystem::path& path);

/// Detection file with id -1 (one row per detection, in frame order).
void write_detections(const std::vector<FrameInput>& frames, const std::filesystem::path& path);

/// Ground truth with active flag 1, class 1 and visibility 1.
void write_ground_truth(const TrajectorySet& gt, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace stc
