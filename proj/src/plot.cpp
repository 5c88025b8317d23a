#include "stc/plot.hpp"

#include <algorithm>
#include <set>

#include "stc/metrics.hpp"
#include "stc/mot_io.hpp"
#include "text_util.hpp"

namespace stc {

namespace {

constexpr const char* kGtColor = "#ff8c00";
constexpr const char* kPredColor = "#2ca02c";
constexpr const char* kTpColor = "#2ca02c";
constexpr const char* kFnColor = "#d62728";
constexpr const char* kFpColor = "#ff69b4";

using detail::fixed2;

std::string polyline(const Trajectory& t, int from, int to, const char* color, const char* cls) {
  std::string pts;
  for (auto it = t.samples.lower_bound(from); it != t.samples.end() && it->first <= to; ++it) {
    if (!pts.empty()) pts += ' ';
    pts += fixed2(it->second.box.center_x()) + ',' + fixed2(it->second.box.center_y());
  }
  if (pts.empty()) return {};
  return "<polyline class=\"" + std::string(cls) + "\" data-id=\"" + std::to_string(t.id) +
         "\" fill=\"none\" stroke=\"" + color + "\" points=\"" + pts + "\"/>\n";
}

std::string rect(const BBox& b, const char* color, const char* status, int id) {
  return "<rect class=\"" + std::string(status) + "\" data-id=\"" + std::to_string(id) + "\" x=\"" +
         fixed2(b.left()) + "\" y=\"" + fixed2(b.top()) + "\" width=\"" + fixed2(b.width()) +
         "\" height=\"" + fixed2(b.height()) + "\" fill=\"none\" stroke=\"" + color + "\"/>\n";
}

}  // namespace

PlotDocument render_plot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                         double iou_threshold, int history) {
  FrameMatches matches;
  clear_mot(gt, pred, iou_threshold, &matches);

  double max_x = 1.0, max_y = 1.0;
  std::set<int> frames;
  for (const auto* side : {&gt, &pred}) {
    for (const auto& t : *side) {
      for (const auto& [f, s] : t.samples) {
        frames.insert(f);
        max_x = std::max(max_x, s.box.right());
        max_y = std::max(max_y, s.box.bottom());
      }
    }
  }

  PlotDocument doc;
  doc.csv = "frame,id,x_c,y_c,status\n";
  std::string& svg = doc.svg;
  svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(max_x) + "\" height=\"" + fixed2(max_y) +
         "\" viewBox=\"0 0 " + fixed2(max_x) + ' ' + fixed2(max_y) + "\">\n";
  svg += "<g id=\"gt-trajectories\">\n";
  for (const auto& t : gt) svg += polyline(t, t.empty() ? 0 : t.first_frame(), t.empty() ? -1 : t.last_frame(), kGtColor, "gt");
  svg += "</g>\n<g id=\"pred-trajectories\">\n";
  for (const auto& t : pred) svg += polyline(t, t.empty() ? 0 : t.first_frame(), t.empty() ? -1 : t.last_frame(), kPredColor, "pred");
  svg += "</g>\n";

  for (int f : frames) {
    std::set<int> matched_gt, matched_pred;
    if (auto it = matches.find(f); it != matches.end()) {
      for (auto [g, p] : it->second) {
        matched_gt.insert(g);
        matched_pred.insert(p);
      }
    }
    std::string layer;
    for (const auto& t : gt) layer += polyline(t, f - history + 1, f, kGtColor, "gt-history");
    for (const auto& t : pred) layer += polyline(t, f - history + 1, f, kPredColor, "pred-history");
    for (const auto& t : pred) {
      auto it = t.samples.find(f);
      if (it == t.samples.end()) continue;
      const bool tp = matched_pred.count(t.id) > 0;
      layer += rect(it->second.box, tp ? kTpColor : kFpColor, tp ? "TP" : "FP", t.id);
      doc.csv += std::to_string(f) + ',' + std::to_string(t.id) + ',' + fixed2(it->second.box.center_x()) + ',' +
                 fixed2(it->second.box.center_y()) + ',' + (tp ? "TP" : "FP") + '\n';
    }
    for (const auto& t : gt) {
      auto it = t.samples.find(f);
      if (it == t.samples.end() || matched_gt.count(t.id)) continue;
      layer += rect(it->second.box, kFnColor, "FN", t.id);
      doc.csv += std::to_string(f) + ',' + std::to_string(t.id) + ',' + fixed2(it->second.box.center_x()) + ',' +
                 fixed2(it->second.box.center_y()) + ",FN\n";
    }
    svg += "<g id=\"frame-" + std::to_string(f) + "\" class=\"frame\" display=\"none\">\n" + layer + "</g>\n";
  }
  svg += "</svg>\n";
  return doc;
}

void emit_plot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
               const std::filesystem::path& path) {
  const PlotDocument doc = render_plot(gt, pred);
  write_text_file(path, doc.svg);
  auto csv_path = path;
  csv_path.replace_extension(".csv");
  write_text_file(csv_path, doc.csv);
}

}  // namespace stc
