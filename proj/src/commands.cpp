#include "stc/commands.hpp"

#include <future>
#include <json.hpp>
#include <sstream>

#include "stc/errors.hpp"
#include "stc/plot.hpp"
#include "stc/postprocess.hpp"
#include "stc/synthetic.hpp"
#include "stc/tracker.hpp"
#include "text_util.hpp"

namespace stc {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : detail::split(text, ',')) {
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

PipelineConfig config_or_default(const std::optional<std::filesystem::path>& path) {
  return path ? load_config(*path) : PipelineConfig{};
}

std::string six(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> report_fields(const MetricsReport& r, const MetricSelection& sel) {
  std::vector<std::pair<std::string, std::string>> f;
  if (sel.mota) {
    f.emplace_back("MOTA", six(r.clear.mota));
    f.emplace_back("MOTP", six(r.clear.motp));
    f.emplace_back("MOTP_distance", six(r.clear.motp_distance));
    f.emplace_back("FP", std::to_string(r.clear.fp));
    f.emplace_back("FN", std::to_string(r.clear.fn));
    f.emplace_back("IDSW", std::to_string(r.clear.idsw));
    f.emplace_back("GT", std::to_string(r.clear.gt_count));
    f.emplace_back("MT", std::to_string(r.clear.mt));
    f.emplace_back("ML", std::to_string(r.clear.ml));
    f.emplace_back("GT_tracks", std::to_string(r.clear.gt_tracks));
  }
  if (sel.idf1) {
    f.emplace_back("IDF1", six(r.id.idf1));
    f.emplace_back("IDTP", std::to_string(r.id.idtp));
    f.emplace_back("IDFP", std::to_string(r.id.idfp));
    f.emplace_back("IDFN", std::to_string(r.id.idfn));
  }
  if (sel.hota) {
    double det = 0.0, ass = 0.0;
    long tpa = 0, fna = 0, fpa = 0;
    for (const auto& a : r.hota.per_alpha) {
      det += a.det_a;
      ass += a.ass_a;
      tpa += a.tpa;
      fna += a.fna;
      fpa += a.fpa;
    }
    const double n = std::max<double>(1.0, static_cast<double>(r.hota.per_alpha.size()));
    f.emplace_back("HOTA", six(r.hota.hota));
    f.emplace_back("DetA", six(det / n));
    f.emplace_back("AssA", six(ass / n));
    f.emplace_back("TPA", std::to_string(tpa));
    f.emplace_back("FNA", std::to_string(fna));
    f.emplace_back("FPA", std::to_string(fpa));
  }
  return f;
}

}  // namespace

MetricSelection parse_metric_selection(const std::string& text) {
  MetricSelection sel{false, false, false};
  const auto names = split_list(text);
  if (names.empty()) throw UsageError("--metrics needs at least one of mota, idf1, hota");
  for (const auto& name : names) {
    if (name == "mota") {
      sel.mota = true;
    } else if (name == "idf1") {
      sel.idf1 = true;
    } else if (name == "hota") {
      sel.hota = true;
    } else {
      throw UsageError("unknown metric '" + name + "' (expected mota, idf1, hota)");
    }
  }
  return sel;
}

std::string format_report_text(const std::vector<MetricsReport>& reports, const MetricSelection& sel) {
  std::string out;
  for (const auto& r : reports) {
    for (const auto& [k, v] : report_fields(r, sel)) out += r.name + '.' + k + " = " + v + '\n';
  }
  return out;
}

std::string format_report_json(const std::vector<MetricsReport>& reports, const MetricSelection& sel) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    row["sequence"] = r.name;
    if (sel.mota) {
      row["MOTA"] = r.clear.mota;
      row["MOTP"] = r.clear.motp;
      row["MOTP_distance"] = r.clear.motp_distance;
      row["FP"] = r.clear.fp;
      row["FN"] = r.clear.fn;
      row["IDSW"] = r.clear.idsw;
      row["GT"] = r.clear.gt_count;
      row["matches"] = r.clear.matches;
      row["MT"] = r.clear.mt;
      row["ML"] = r.clear.ml;
      row["GT_tracks"] = r.clear.gt_tracks;
    }
    if (sel.idf1) {
      row["IDF1"] = r.id.idf1;
      row["IDTP"] = r.id.idtp;
      row["IDFP"] = r.id.idfp;
      row["IDFN"] = r.id.idfn;
    }
    if (sel.hota) {
      row["HOTA"] = r.hota.hota;
      auto& per = row["HOTA_per_alpha"] = nlohmann::ordered_json::array();
      for (const auto& a : r.hota.per_alpha) {
        per.push_back({{"alpha", a.alpha}, {"HOTA", a.hota}, {"DetA", a.det_a}, {"AssA", a.ass_a},
                       {"TP", a.tp}, {"FN", a.fn}, {"FP", a.fp}, {"TPA", a.tpa}, {"FNA", a.fna},
                       {"FPA", a.fpa}});
      }
    }
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + '\n';
}

TrajectorySet track_sequence(const Sequence& seq, const PipelineConfig& config, bool gsi_on, bool link_on) {
  TrajectorySet result = run_tracker(seq.frames, config.tracker);
  if (link_on) result = link(result, motion_consistency_scorer(), config.link);
  if (gsi_on) result = gsi(result, config.gsi);
  return result;
}

LoadStats run_track(const TrackOptions& opts) {
  const PipelineConfig config = config_or_default(opts.config);
  const Sequence seq = load_sequence(opts.dets, opts.emb, std::nullopt);
  write_results(track_sequence(seq, config, opts.gsi, opts.link), opts.out);
  return seq.stats;
}

MetricsReport evaluate_against(const GroundTruth& gt, const TrajectorySet& pred, std::string name) {
  const TrajectorySet filtered = remove_ignored(gt, pred);
  return evaluate(std::move(name), gt.tracks, filtered);
}

std::vector<MetricsReport> run_eval(const EvalOptions& opts) {
  if (opts.gt.empty() || opts.gt.size() != opts.res.size()) {
    throw UsageError("eval needs the same number of --gt and --res files");
  }
  std::vector<std::future<MetricsReport>> jobs;
  for (std::size_t k = 0; k < opts.gt.size(); ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      LoadStats stats;
      const GroundTruth gt = read_ground_truth(opts.gt[k], stats);
      const TrajectorySet pred = read_results(opts.res[k]);
      return evaluate_against(gt, pred, opts.res[k].stem().string());
    }));
  }
  std::vector<MetricsReport> reports;
  for (auto& j : jobs) reports.push_back(j.get());
  if (reports.size() > 1) reports.push_back(combine(reports));
  const std::string text = opts.json ? format_report_json(reports, opts.metrics)
                                     : format_report_text(reports, opts.metrics);
  write_text_file(opts.out, text);
  return reports;
}

void run_synth(const std::filesystem::path& spec_path, std::uint64_t seed,
               const std::filesystem::path& out_dir) {
  const SceneSpec spec = parse_scene_spec(read_text_file(spec_path));
  write_synthetic(generate_synthetic(spec, seed), out_dir);
}

void run_plot(const std::filesystem::path& gt, const std::filesystem::path& res,
              const std::filesystem::path& out) {
  LoadStats stats;
  const GroundTruth truth = read_ground_truth(gt, stats);
  emit_plot(truth.tracks, read_results(res), out);
}

std::vector<CostMode> parse_modes(const std::string& text) {
  std::vector<CostMode> modes;
  for (const auto& name : split_list(text)) {
    try {
      modes.push_back(parse_cost_mode(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (modes.empty()) throw UsageError("--modes needs at least one cost mode");
  return modes;
}

std::vector<AblationRow> run_ablation(const Sequence& seq, const std::vector<CostMode>& modes,
                                      const PipelineConfig& base) {
  if (!seq.gt) throw DataError("ablation needs ground truth");
  std::vector<AblationRow> rows;
  for (const auto& mode : modes) {
    PipelineConfig config = base;
    config.tracker.cost_mode = mode;
    const auto report = evaluate_against(*seq.gt, run_tracker(seq.frames, config.tracker), to_string(mode));
    rows.push_back({report.name, report.clear.mota, report.id.idf1, report.hota.hota, report.clear.fp,
                    report.clear.fn, report.clear.idsw});
  }
  return rows;
}

std::string format_ablation(const std::vector<AblationRow>& rows) {
  std::string out = "mode,MOTA,IDF1,HOTA,FP,FN,IDSW\n";
  for (const auto& r : rows) {
    out += r.mode + ',' + six(r.mota) + ',' + six(r.idf1) + ',' + six(r.hota) + ',' + std::to_string(r.fp) +
           ',' + std::to_string(r.fn) + ',' + std::to_string(r.idsw) + '\n';
  }
  return out;
}

std::vector<AblationRow> run_ablate(const AblateOptions& opts) {
  const auto modes = parse_modes(opts.modes);
  const PipelineConfig config = config_or_default(opts.config);
  const Sequence seq = load_sequence(opts.dets, opts.emb, opts.gt);
  auto rows = run_ablation(seq, modes, config);
  write_text_file(opts.out, format_ablation(rows));
  return rows;
}

}  // namespace stc
