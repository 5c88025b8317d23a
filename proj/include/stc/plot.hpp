#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "stc/trajectory.hpp"

namespace stc {

struct PlotDocument {
  std::string svg;
  std::string csv;  // frame,id,x_c,y_c,status (TP/FP for predictions, FN for missed GT)
};

/// Trajectory plot: full GT (orange) and predicted (green) tracks, plus one
/// hidden layer per frame holding 20-frame history polylines and
/// TP (green) / FN (red) / FP (pink) boxes from the CLEAR matching.
PlotDocument render_plot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                         double iou_threshold = 0.5, int history = 20);

/// Writes the SVG to `path` and the CSV next to it with extension ".csv".
void emit_plot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
               const std::filesystem::path& path);

}  // namespace stc
