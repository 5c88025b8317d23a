#pragma once

#include <Eigen/Core>
#include <span>

namespace stc {

/// L2-normalized appearance descriptor. The dimension is whatever the
/// embedding source produced.
class Embedding {
 public:
  /// Normalizes `values`. Throws std::invalid_argument for empty, non-finite
  /// or zero-norm input.
  explicit Embedding(std::span<const double> values);
  explicit Embedding(const Eigen::VectorXd& values);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index dim() const { return values_.size(); }

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  struct Trusted {};
  Embedding(Eigen::VectorXd unit, Trusted) : values_(std::move(unit)) {}
  friend struct EmaAccess;

  Eigen::VectorXd values_;
};

/// 1 - <a, b>, clamped to [0, 2].
double cosine_distance(const Embedding& a, const Embedding& b);

struct TrackAppearance {
  Embedding ema;
  double momentum = 0.9;
};

struct EmaResult {
  TrackAppearance appearance;
  /// Set when the blend had zero norm and the previous embedding was kept.
  bool degenerate = false;
};

/// e <- momentum * e + (1 - momentum) * f, renormalized.
EmaResult ema_update(const TrackAppearance& app, const Embedding& f);

}  // namespace stc
