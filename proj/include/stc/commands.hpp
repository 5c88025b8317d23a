#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stc/association.hpp"
#include "stc/config.hpp"
#include "stc/metrics.hpp"
#include "stc/mot_io.hpp"

namespace stc {

// Library side of the `stc` command-line tool. Errors surface as DataError
// (bad inputs) or UsageError (bad option values).

struct MetricSelection {
  bool mota = true;
  bool idf1 = true;
  bool hota = true;
};

/// "mota,idf1,hota" or any subset. Throws UsageError.
MetricSelection parse_metric_selection(const std::string& text);

/// Flat "<sequence>.<KEY> = <value>" lines, one block per report.
std::string format_report_text(const std::vector<MetricsReport>& reports, const MetricSelection& sel);
/// JSON array, one record per report.
std::string format_report_json(const std::vector<MetricsReport>& reports, const MetricSelection& sel);

struct TrackOptions {
  std::filesystem::path dets;
  std::optional<std::filesystem::path> emb;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  bool gsi = false;
  bool link = false;
};

/// Tracks one sequence and writes the result file. Returns the load
/// statistics so the caller can report dropped rows.
LoadStats run_track(const TrackOptions& opts);

/// Tracker plus the optional offline steps, in memory.
TrajectorySet track_sequence(const Sequence& seq, const PipelineConfig& config, bool gsi, bool link);

struct EvalOptions {
  std::vector<std::filesystem::path> gt;
  std::vector<std::filesystem::path> res;
  MetricSelection metrics;
  std::filesystem::path out;
  bool json = false;
};

/// Evaluates each (gt, res) pair concurrently and appends an OVERALL record
/// when there is more than one sequence.
std::vector<MetricsReport> run_eval(const EvalOptions& opts);

MetricsReport evaluate_against(const GroundTruth& gt, const TrajectorySet& pred, std::string name);

void run_synth(const std::filesystem::path& spec_path, std::uint64_t seed,
               const std::filesystem::path& out_dir);

void run_plot(const std::filesystem::path& gt, const std::filesystem::path& res,
              const std::filesystem::path& out);

struct AblationRow {
  std::string mode;
  double mota = 0.0;
  double idf1 = 0.0;
  double hota = 0.0;
  long fp = 0;
  long fn = 0;
  long idsw = 0;
};

/// Comma-separated cost modes, e.g. "min,iou,emb,fused:0.5". Throws UsageError.
std::vector<CostMode> parse_modes(const std::string& text);

std::vector<AblationRow> run_ablation(const Sequence& seq, const std::vector<CostMode>& modes,
                                      const PipelineConfig& base);

/// "mode,MOTA,IDF1,HOTA,FP,FN,IDSW" header plus one row per mode.
std::string format_ablation(const std::vector<AblationRow>& rows);

struct AblateOptions {
  std::filesystem::path dets;
  std::optional<std::filesystem::path> emb;
  std::filesystem::path gt;
  std::optional<std::filesystem::path> config;
  std::string modes = "min,iou,emb,fused:0.5";
  std::filesystem::path out;
};

std::vector<AblationRow> run_ablate(const AblateOptions& opts);

}  // namespace stc
