#pragma once

#include <array>

namespace stc {

/// Center parameterization used by the motion model: center, aspect ratio
/// (width / height) and height.
struct CenterBox {
  double x_c = 0.0;
  double y_c = 0.0;
  double aspect = 0.0;
  double height = 0.0;
};

struct Corners {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

/// Axis-aligned box in continuous pixel coordinates (top-left, width, height).
/// Width and height are strictly positive; construction throws
/// std::invalid_argument otherwise.
class BBox {
 public:
  BBox(double left, double top, double width, double height);

  static BBox from_center(const CenterBox& c);
  static BBox from_corners(const Corners& c);

  double left() const { return left_; }
  double top() const { return top_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double right() const { return left_ + width_; }
  double bottom() const { return top_ + height_; }
  double area() const { return width_ * height_; }
  double center_x() const { return left_ + 0.5 * width_; }
  double center_y() const { return top_ + 0.5 * height_; }

  CenterBox to_center() const;
  Corners to_corners() const;

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double left_;
  double top_;
  double width_;
  double height_;
};

double iou(const BBox& a, const BBox& b);

/// Generalized IoU: IoU minus the fraction of the smallest enclosing box not
/// covered by the union. Range (-1, 1].
double giou(const BBox& a, const BBox& b);

/// (1 - giou) / 2, mapped onto [0, 1) so it shares a scale with cosine costs.
double giou_distance(const BBox& a, const BBox& b);

double iou_distance(const BBox& a, const BBox& b);

}  // namespace stc
