#pragma once

#include <map>
#include <vector>

#include "stc/geometry.hpp"

namespace stc {

struct TrajectorySample {
  BBox box;
  double score = 1.0;
  // Ground-truth only; predictions keep the defaults.
  int object_class = 1;
  double visibility = 1.0;
};

/// One identity over time: at most one box per frame.
struct Trajectory {
  int id = 0;
  std::map<int, TrajectorySample> samples;

  int first_frame() const { return samples.begin()->first; }
  int last_frame() const { return samples.rbegin()->first; }
  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

using TrajectorySet = std::vector<Trajectory>;

}  // namespace stc
