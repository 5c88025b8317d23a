#include "stc/postprocess.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace stc {

void GsiConfig::validate() const {
  if (!(kernel_length_scale > 0.0)) throw std::invalid_argument("GsiConfig: length scale must be > 0");
  if (!(observation_noise >= 0.0)) throw std::invalid_argument("GsiConfig: noise must be >= 0");
  if (max_gap < 1) throw std::invalid_argument("GsiConfig: max_gap must be >= 1");
}

void LinkConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("LinkConfig: threshold must lie in [0, 1]");
  if (max_gap < 1) throw std::invalid_argument("LinkConfig: max_gap must be >= 1");
}

namespace {

double squared_exponential(double a, double b, double length_scale) {
  const double d = (a - b) / length_scale;
  return std::exp(-0.5 * d * d);
}

// Posterior mean at `query` for observations (t, y): linear trend plus GP on
// the residuals.
Eigen::MatrixXd gp_smooth(const Eigen::VectorXd& t, const Eigen::MatrixXd& y,
                          const Eigen::VectorXd& query, const GsiConfig& config) {
  const Eigen::Index n = t.size();
  const double t_mean = t.mean();
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = t.array() - t_mean;
  const Eigen::MatrixXd coef = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  const Eigen::MatrixXd residual = y - design * coef;

  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = squared_exponential(t(i), t(j), config.kernel_length_scale);
  }
  k.diagonal().array() += config.observation_noise * config.observation_noise;
  const Eigen::MatrixXd weights = k.llt().solve(residual);

  const Eigen::Index m = query.size();
  Eigen::MatrixXd cross(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) cross(i, j) = squared_exponential(query(i), t(j), config.kernel_length_scale);
  }
  Eigen::MatrixXd query_design(m, 2);
  query_design.col(0).setOnes();
  query_design.col(1) = query.array() - t_mean;
  return query_design * coef + cross * weights;
}

Trajectory smooth_one(const Trajectory& traj, const GsiConfig& config) {
  if (traj.size() < 2) return traj;
  const Eigen::Index n = static_cast<Eigen::Index>(traj.size());
  Eigen::VectorXd t(n);
  Eigen::MatrixXd y(n, 4);
  Eigen::Index row = 0;
  for (const auto& [frame, s] : traj.samples) {
    t(row) = frame;
    y.row(row) << s.box.center_x(), s.box.center_y(), std::log(s.box.width()), std::log(s.box.height());
    ++row;
  }

  // Query = observed frames followed by the frames of fillable gaps.
  std::vector<int> query_frames;
  std::vector<double> query_scores;
  for (const auto& [frame, s] : traj.samples) query_frames.push_back(frame);
  for (auto it = traj.samples.begin(); std::next(it) != traj.samples.end(); ++it) {
    const auto next = std::next(it);
    const int missing = next->first - it->first - 1;
    if (missing < 1 || missing > config.max_gap) continue;
    const double score = 0.5 * (it->second.score + next->second.score);
    for (int f = it->first + 1; f < next->first; ++f) {
      query_frames.push_back(f);
      query_scores.push_back(score);
    }
  }
  Eigen::VectorXd query(static_cast<Eigen::Index>(query_frames.size()));
  for (std::size_t i = 0; i < query_frames.size(); ++i) query(static_cast<Eigen::Index>(i)) = query_frames[i];
  const Eigen::MatrixXd mean = gp_smooth(t, y, query, config);

  Trajectory out;
  out.id = traj.id;
  std::size_t q = 0;
  for (const auto& [frame, s] : traj.samples) {
    const auto r = static_cast<Eigen::Index>(q++);
    TrajectorySample smoothed = s;
    const double w = std::exp(mean(r, 2)), h = std::exp(mean(r, 3));
    smoothed.box = BBox(mean(r, 0) - 0.5 * w, mean(r, 1) - 0.5 * h, w, h);
    out.samples.emplace(frame, smoothed);
  }
  for (std::size_t k = 0; q < query_frames.size(); ++q, ++k) {
    const auto r = static_cast<Eigen::Index>(q);
    const double w = std::exp(mean(r, 2)), h = std::exp(mean(r, 3));
    out.samples.emplace(query_frames[q],
                        TrajectorySample{BBox(mean(r, 0) - 0.5 * w, mean(r, 1) - 0.5 * h, w, h),
                                         query_scores[k]});
  }
  return out;
}

}  // namespace

TrajectorySet gsi(const TrajectorySet& trajectories, const GsiConfig& config) {
  config.validate();
  TrajectorySet out;
  out.reserve(trajectories.size());
  for (const auto& t : trajectories) out.push_back(smooth_one(t, config));
  return out;
}

TrajectorySet link(const TrajectorySet& trajectories, const LinkScorer& scorer,
                   const LinkConfig& config) {
  config.validate();
  const std::size_t n = trajectories.size();
  struct Candidate {
    double score;
    std::size_t earlier;
    std::size_t later;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    if (trajectories[a].empty()) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || trajectories[b].empty()) continue;
      const int gap = trajectories[b].first_frame() - trajectories[a].last_frame();
      if (gap < 1 || gap > config.max_gap) continue;
      const double s = scorer(trajectories[a], trajectories[b]);
      if (!(s >= 0.0 && s <= 1.0) || !(s > config.threshold)) continue;
      candidates.push_back({s, a, b});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::tie(trajectories[x.earlier].id, trajectories[x.later].id) <
           std::tie(trajectories[y.earlier].id, trajectories[y.later].id);
  });

  // Chains: root[i] is the trajectory whose id i ends up carrying.
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  std::vector<char> has_successor(n, 0), has_predecessor(n, 0);
  std::vector<Trajectory> merged(trajectories.begin(), trajectories.end());

  for (const auto& c : candidates) {
    if (has_successor[c.earlier] || has_predecessor[c.later]) continue;
    const std::size_t ra = find(c.earlier), rb = find(c.later);
    if (ra == rb) continue;
    const auto& head = merged[ra].samples;
    const auto& tail = merged[rb].samples;
    const bool overlaps = std::any_of(tail.begin(), tail.end(),
                                      [&](const auto& kv) { return head.count(kv.first) > 0; });
    if (overlaps) continue;
    for (const auto& kv : tail) merged[ra].samples.insert(kv);
    merged[rb].samples.clear();
    root[rb] = ra;
    has_successor[c.earlier] = 1;
    has_predecessor[c.later] = 1;
  }

  TrajectorySet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) == i && !merged[i].empty()) out.push_back(std::move(merged[i]));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return out;
}

LinkScorer motion_consistency_scorer(double tolerance) {
  return [tolerance](const Trajectory& earlier, const Trajectory& later) {
    const auto last = earlier.samples.rbegin();
    const BBox& end_box = last->second.box;
    double vx = 0.0, vy = 0.0;
    if (earlier.size() >= 2) {
      const auto prev = std::next(last);
      const double dt = last->first - prev->first;
      vx = (end_box.center_x() - prev->second.box.center_x()) / dt;
      vy = (end_box.center_y() - prev->second.box.center_y()) / dt;
    }
    const auto& start = *later.samples.begin();
    const double dt = start.first - last->first;
    const double ex = end_box.center_x() + vx * dt - start.second.box.center_x();
    const double ey = end_box.center_y() + vy * dt - start.second.box.center_y();
    const double error = std::hypot(ex, ey) / end_box.height();
    return std::exp(-error / tolerance);
  };
}

}  // namespace stc
