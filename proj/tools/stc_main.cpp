// stc: batch multi-object tracking, evaluation and synthetic data tool.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <iostream>

#include "stc/commands.hpp"
#include "stc/errors.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

void report_stats(const stc::LoadStats& s) {
  if (s.malformed) std::cerr << "warning: skipped " << s.malformed << " malformed detection rows\n";
  if (s.invalid_boxes) std::cerr << "warning: dropped " << s.invalid_boxes << " detections with non-positive size\n";
  if (s.embeddings_rejected) std::cerr << "warning: rejected " << s.embeddings_rejected << " embedding records\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracking-by-detection engine with MOT metrics"};
  app.require_subcommand(1);

  stc::TrackOptions track;
  std::string emb, config;
  auto* track_cmd = app.add_subcommand("track", "Track one sequence of detections");
  track_cmd->add_option("--dets", track.dets, "MOTChallenge detection file")->required();
  track_cmd->add_option("--emb", emb, "Embedding file (binary EMB1 or text)");
  track_cmd->add_option("--config", config, "Key-value configuration file");
  track_cmd->add_option("--out", track.out, "Result file")->required();
  track_cmd->add_flag("--gsi", track.gsi, "Apply Gaussian-smoothed interpolation");
  track_cmd->add_flag("--link", track.link, "Merge fragments with the motion-consistency linker");

  stc::EvalOptions eval;
  std::string metrics = "mota,idf1,hota";
  std::string format = "text";
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate results against ground truth");
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth file (repeatable)")->required();
  eval_cmd->add_option("--res", eval.res, "Result file, paired with --gt (repeatable)")->required();
  eval_cmd->add_option("--metrics", metrics, "Subset of mota,idf1,hota");
  eval_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  eval_cmd->add_option("--out", eval.out, "Report file")->required();

  std::string spec_path, out_dir;
  std::uint64_t seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sequence");
  synth_cmd->add_option("--spec", spec_path, "Scene specification file")->required();
  synth_cmd->add_option("--seed", seed, "Random seed")->required();
  synth_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  std::string plot_gt, plot_res, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Plot predicted and ground-truth trajectories");
  plot_cmd->add_option("--gt", plot_gt, "Ground-truth file")->required();
  plot_cmd->add_option("--res", plot_res, "Result file")->required();
  plot_cmd->add_option("--out", plot_out, "SVG file; a CSV is written next to it")->required();

  stc::AblateOptions ablate;
  std::string ablate_emb, ablate_config;
  auto* ablate_cmd = app.add_subcommand("ablate", "Compare association cost modes");
  ablate_cmd->add_option("--dets", ablate.dets, "Detection file")->required();
  ablate_cmd->add_option("--emb", ablate_emb, "Embedding file");
  ablate_cmd->add_option("--gt", ablate.gt, "Ground-truth file")->required();
  ablate_cmd->add_option("--config", ablate_config, "Key-value configuration file");
  ablate_cmd->add_option("--modes", ablate.modes, "Comma-separated: min, iou, emb, fused:<lambda>");
  ablate_cmd->add_option("--out", ablate.out, "CSV table")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*track_cmd) {
      if (!emb.empty()) track.emb = emb;
      if (!config.empty()) track.config = config;
      report_stats(stc::run_track(track));
    } else if (*eval_cmd) {
      eval.metrics = stc::parse_metric_selection(metrics);
      eval.json = format == "json";
      stc::run_eval(eval);
    } else if (*synth_cmd) {
      stc::run_synth(spec_path, seed, out_dir);
    } else if (*plot_cmd) {
      stc::run_plot(plot_gt, plot_res, plot_out);
    } else if (*ablate_cmd) {
      if (!ablate_emb.empty()) ablate.emb = ablate_emb;
      if (!ablate_config.empty()) ablate.config = ablate_config;
      stc::run_ablate(ablate);
    }
  } catch (const stc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
