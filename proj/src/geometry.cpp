#include "stc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stc {

BBox::BBox(double left, double top, double width, double height)
    : left_(left), top_(top), width_(width), height_(height) {
  if (!std::isfinite(left) || !std::isfinite(top) || !std::isfinite(width) ||
      !std::isfinite(height)) {
    throw std::invalid_argument("BBox: non-finite coordinate");
  }
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("BBox: width and height must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

BBox BBox::from_center(const CenterBox& c) {
  const double w = c.aspect * c.height;
  return BBox(c.x_c - 0.5 * w, c.y_c - 0.5 * c.height, w, c.height);
}

BBox BBox::from_corners(const Corners& c) {
  return BBox(c.x1, c.y1, c.x2 - c.x1, c.y2 - c.y1);
}

CenterBox BBox::to_center() const {
  return {center_x(), center_y(), width_ / height_, height_};
}

Corners BBox::to_corners() const { return {left_, top_, right(), bottom()}; }

namespace {

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double h = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  const double enclosing = (std::max(a.right(), b.right()) - std::min(a.left(), b.left())) *
                           (std::max(a.bottom(), b.bottom()) - std::min(a.top(), b.top()));
  const double overlap = std::clamp(inter / uni, 0.0, 1.0);
  return overlap - (enclosing - uni) / enclosing;
}

double giou_distance(const BBox& a, const BBox& b) { return 0.5 * (1.0 - giou(a, b)); }

double iou_distance(const BBox& a, const BBox& b) { return 1.0 - iou(a, b); }

}  // namespace stc
