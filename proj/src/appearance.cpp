#include "stc/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stc {

namespace {

Eigen::VectorXd normalized(Eigen::VectorXd v) {
  if (v.size() == 0) throw std::invalid_argument("Embedding: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("Embedding: non-finite value");
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("Embedding: zero-norm vector");
  v /= n;
  return v;
}

}  // namespace

struct EmaAccess {
  static Embedding make(Eigen::VectorXd unit) {
    return Embedding(std::move(unit), Embedding::Trusted{});
  }
};

Embedding::Embedding(std::span<const double> values)
    : values_(normalized(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                           static_cast<Eigen::Index>(values.size())))) {}

Embedding::Embedding(const Eigen::VectorXd& values) : values_(normalized(values)) {}

double cosine_distance(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("cosine_distance: dimension mismatch");
  return std::clamp(1.0 - a.values().dot(b.values()), 0.0, 2.0);
}

EmaResult ema_update(const TrackAppearance& app, const Embedding& f) {
  if (app.ema.dim() != f.dim()) throw std::invalid_argument("ema_update: dimension mismatch");
  const Eigen::VectorXd& e = app.ema.values();
  // Same blend as momentum * e + (1 - momentum) * f; exact when f == e.
  Eigen::VectorXd blend = e + (1.0 - app.momentum) * (f.values() - e);
  const double n = blend.norm();
  if (!(n > std::numeric_limits<double>::epsilon())) {
    return {app, true};
  }
  // Already unit length up to rounding: leave the bits alone.
  if (std::abs(n - 1.0) > 4 * std::numeric_limits<double>::epsilon()) blend /= n;
  return {TrackAppearance{EmaAccess::make(std::move(blend)), app.momentum}, false};
}

}  // namespace stc
