#include "stc/association.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace stc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Shortest augmenting path Hungarian method on an n x m matrix with n <= m.
// Returns the column for each row.
std::vector<std::size_t> hungarian(const std::vector<double>& a, std::size_t n, std::size_t m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

CostMode parse_cost_mode(const std::string& text) {
  if (text == "min") return cost_mode::MinFusion{};
  if (text == "iou") return cost_mode::IoUOnly{};
  if (text == "emb") return cost_mode::EmbeddingOnly{};
  const std::string prefix = "fused:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    double lambda = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), lambda);
    if (ec != std::errc() || ptr != num.data() + num.size() || !(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("bad fused weight in cost mode '" + text + "'");
    }
    return cost_mode::LambdaFused{lambda};
  }
  throw std::invalid_argument("unknown cost mode '" + text + "' (expected min, iou, emb, fused:<l>)");
}

std::string to_string(const CostMode& mode) {
  return std::visit(overloaded{
                        [](cost_mode::MinFusion) -> std::string { return "min"; },
                        [](cost_mode::IoUOnly) -> std::string { return "iou"; },
                        [](cost_mode::EmbeddingOnly) -> std::string { return "emb"; },
                        [](cost_mode::LambdaFused f) { return "fused:" + format_double(f.lambda); },
                    },
                    mode);
}

OverlapMeasure parse_overlap_measure(const std::string& text) {
  if (text == "giou") return OverlapMeasure::GIoU;
  if (text == "iou") return OverlapMeasure::IoU;
  throw std::invalid_argument("unknown overlap measure '" + text + "' (expected giou or iou)");
}

std::string to_string(OverlapMeasure m) { return m == OverlapMeasure::GIoU ? "giou" : "iou"; }

CostMatrix build_cost(std::span<const AssociationCandidate> tracks,
                      std::span<const AssociationCandidate> detections, const CostParams& params) {
  CostMatrix cost(tracks.size(), detections.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      const auto& t = tracks[i];
      const auto& d = detections[j];
      const double d_iou = params.overlap == OverlapMeasure::GIoU ? giou_distance(t.box, d.box)
                                                                   : iou_distance(t.box, d.box);
      if (d_iou >= 1.0) {
        cost(i, j) = CostMatrix::kInfeasible;
        continue;
      }
      if (t.appearance == nullptr || d.appearance == nullptr) {
        cost(i, j) = d_iou;
        continue;
      }
      const double d_cos = cosine_distance(*t.appearance, *d.appearance);
      cost(i, j) = std::visit(
          overloaded{
              [&](cost_mode::MinFusion) {
                const bool pass = d_cos <= params.gate_emb && d_iou <= params.gate_iou;
                return std::min(d_iou, pass ? d_cos : 1.0);
              },
              [&](cost_mode::IoUOnly) { return d_iou; },
              [&](cost_mode::EmbeddingOnly) { return std::min(d_cos, 1.0); },
              [&](cost_mode::LambdaFused f) {
                return f.lambda * std::min(d_cos, 1.0) + (1.0 - f.lambda) * d_iou;
              },
          },
          params.mode);
    }
  }
  return cost;
}

std::vector<std::optional<std::size_t>> linear_assignment(const CostMatrix& cost) {
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  std::vector<std::optional<std::size_t>> result(rows);
  if (cost.empty()) return result;

  double max_finite = 0.0;
  bool any_feasible = false;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (CostMatrix::feasible(cost(r, c))) {
        max_finite = std::max(max_finite, std::abs(cost(r, c)));
        any_feasible = true;
      }
    }
  }
  if (!any_feasible) return result;
  // Any assignment that uses one more feasible pair beats any that does not.
  const double big = (static_cast<double>(std::min(rows, cols)) + 1.0) * (2.0 * max_finite + 1.0);

  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  std::vector<double> a(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = transposed ? cost(j, i) : cost(i, j);
      a[i * m + j] = CostMatrix::feasible(v) ? v : big;
    }
  }
  const auto assigned = hungarian(a, n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = transposed ? assigned[i] : i;
    const std::size_t c = transposed ? i : assigned[i];
    if (CostMatrix::feasible(cost(r, c))) result[r] = c;
  }
  return result;
}

Assignment solve(const CostMatrix& cost, double match_threshold) {
  Assignment out;
  const auto row_to_col = linear_assignment(cost);
  std::vector<char> col_used(cost.cols(), 0);
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    const auto& c = row_to_col[r];
    if (c && cost(r, *c) <= match_threshold) {
      out.matches.emplace_back(r, *c);
      col_used[*c] = 1;
    } else {
      out.unmatched_rows.push_back(r);
    }
  }
  for (std::size_t c = 0; c < cost.cols(); ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

}  // namespace stc
