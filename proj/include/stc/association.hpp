#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stc/appearance.hpp"
#include "stc/geometry.hpp"

namespace stc {

/// Dense rows x cols cost matrix, row-major. Entries are in [0, 1] or
/// kInfeasible.
class CostMatrix {
 public:
  static constexpr double kInfeasible = std::numeric_limits<double>::infinity();

  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  static bool feasible(double v) { return v != kInfeasible; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace cost_mode {
struct MinFusion {};
struct IoUOnly {};
struct EmbeddingOnly {};
struct LambdaFused {
  double lambda = 0.5;
};
}  // namespace cost_mode

using CostMode = std::variant<cost_mode::MinFusion, cost_mode::IoUOnly, cost_mode::EmbeddingOnly,
                              cost_mode::LambdaFused>;

/// "min", "iou", "emb", "fused:<lambda>". Throws std::invalid_argument.
CostMode parse_cost_mode(const std::string& text);
std::string to_string(const CostMode& mode);

enum class OverlapMeasure { GIoU, IoU };

OverlapMeasure parse_overlap_measure(const std::string& text);
std::string to_string(OverlapMeasure m);

struct AssociationCandidate {
  BBox box;
  const Embedding* appearance = nullptr;  // not owned; may be null
};

struct CostParams {
  CostMode mode = cost_mode::MinFusion{};
  double gate_emb = 0.4;
  double gate_iou = 0.8;
  OverlapMeasure overlap = OverlapMeasure::GIoU;
};

/// Track x detection costs. MinFusion keeps the appearance distance only when
/// both the appearance and the overlap distance pass their gates; otherwise
/// the appearance term is 1 and the min reduces to the overlap distance.
/// Pairs lacking an embedding on either side fall back to the overlap
/// distance in every mode.
CostMatrix build_cost(std::span<const AssociationCandidate> tracks,
                      std::span<const AssociationCandidate> detections, const CostParams& params);

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (row, col), ascending row
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

/// Minimum-cost one-to-one assignment over feasible entries. The number of
/// feasible pairs is maximized first, then the total cost is minimized.
/// Returns, per row, the assigned column or nullopt.
std::vector<std::optional<std::size_t>> linear_assignment(const CostMatrix& cost);

/// linear_assignment() followed by rejection of pairs costing more than
/// `match_threshold`.
Assignment solve(const CostMatrix& cost, double match_threshold);

}  // namespace stc
