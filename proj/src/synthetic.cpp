#include "stc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "stc/errors.hpp"
#include "text_util.hpp"

namespace stc {

void SceneSpec::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SceneSpec: " + msg); };
  if (identities < 0) fail("identities must be >= 0");
  if (frames < 0) fail("frames must be >= 0");
  if (!(box_width > 0.0) || !(box_height > 0.0)) fail("box size must be positive");
  if (!std::isfinite(speed) || !std::isfinite(lane_spacing) || !std::isfinite(scene_width)) fail("non-finite geometry");
  if (!(position_noise >= 0.0)) fail("position_noise must be >= 0");
  if (!(dropout >= 0.0 && dropout <= 1.0)) fail("dropout must lie in [0, 1]");
  if (!(score >= 0.0 && score <= 1.0)) fail("score must lie in [0, 1]");
  if (!(embedding_angle_deg > 0.0 && embedding_angle_deg <= 90.0)) fail("embedding angle must lie in (0, 90]");
  if (!(embedding_noise >= 0.0)) fail("embedding_noise must be >= 0");
  const int needed = embedding_angle_deg == 90.0 ? identities : identities + 1;
  if (embedding_dim < std::max(1, needed)) {
    fail("embedding_dim " + std::to_string(embedding_dim) + " too small for " + std::to_string(identities) +
         " identities at this angle");
  }
  if (motion == SceneMotion::Crossing) {
    if (identities < 2) fail("crossing motion needs at least two identities");
    if (!(crossing_window_start > 1 && crossing_window_start <= crossing_window_end &&
          crossing_window_end < frames)) {
      fail("crossing window must satisfy 1 < start <= end < frames");
    }
  }
}

namespace {

struct Key {
  const char* name;
  double SceneSpec::*real = nullptr;
  int SceneSpec::*integer = nullptr;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"identities", nullptr, &SceneSpec::identities},
      {"frames", nullptr, &SceneSpec::frames},
      {"motion", nullptr, nullptr},
      {"box_width", &SceneSpec::box_width},
      {"box_height", &SceneSpec::box_height},
      {"speed", &SceneSpec::speed},
      {"lane_spacing", &SceneSpec::lane_spacing},
      {"scene_width", &SceneSpec::scene_width},
      {"crossing_window_start", nullptr, &SceneSpec::crossing_window_start},
      {"crossing_window_end", nullptr, &SceneSpec::crossing_window_end},
      {"crossing_half_distance", &SceneSpec::crossing_half_distance},
      {"position_noise", &SceneSpec::position_noise},
      {"dropout", &SceneSpec::dropout},
      {"score", &SceneSpec::score},
      {"embedding_dim", nullptr, &SceneSpec::embedding_dim},
      {"embedding_angle_deg", &SceneSpec::embedding_angle_deg},
      {"embedding_noise", &SceneSpec::embedding_noise},
  };
  return k;
}

// Unit vectors with pairwise dot product cos(angle): a shared component plus
// one private axis each.
std::vector<Eigen::VectorXd> identity_vectors(const SceneSpec& spec) {
  const double c = std::cos(spec.embedding_angle_deg * std::numbers::pi / 180.0);
  const bool orthogonal = spec.embedding_angle_deg == 90.0;
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < spec.identities; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(spec.embedding_dim);
    if (orthogonal) {
      v(i) = 1.0;
    } else {
      v(0) = std::sqrt(c);
      v(i + 1) = std::sqrt(1.0 - c);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Center x of a crossing identity at frame t (1-based); `sign` -1 starts left.
double crossing_x(const SceneSpec& s, int t, double sign) {
  const double mid = 0.5 * s.scene_width;
  const double start = mid + sign * s.crossing_half_distance;
  const double end = mid - sign * s.crossing_half_distance;
  const double dir = -sign;
  const int ws = s.crossing_window_start, we = s.crossing_window_end;
  const double before = start + dir * s.speed * (ws - 1 - 1);   // position at ws - 1
  const double after = end - dir * s.speed * (s.frames - (we + 1));  // position at we + 1
  if (t < ws) return start + dir * s.speed * (t - 1);
  if (t > we) return end - dir * s.speed * (s.frames - t);
  const double u = static_cast<double>(t - (ws - 1)) / static_cast<double>((we + 1) - (ws - 1));
  return before + u * (after - before);
}

}  // namespace

std::string serialize(const SceneSpec& spec) {
  std::string out;
  for (const auto& k : keys()) {
    std::string value;
    if (k.real) {
      value = detail::shortest(spec.*k.real);
    } else if (k.integer) {
      value = std::to_string(spec.*k.integer);
    } else {
      value = spec.motion == SceneMotion::Crossing ? "crossing" : "linear";
    }
    out += std::string(k.name) + " = " + value + '\n';
  }
  return out;
}

SceneSpec parse_scene_spec(std::string_view text) {
  SceneSpec spec;
  std::set<std::string, std::less<>> seen;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DataError("scene spec: expected 'key = value', got '" + std::string(line) + "'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto& all = keys();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Key& k) { return key == k.name; });
    if (it == all.end()) throw DataError("scene spec: unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw DataError("scene spec: duplicate key '" + std::string(key) + "'");
    if (it->real) {
      const auto v = detail::to_double(value);
      if (!v) throw DataError("scene spec: bad number for '" + std::string(key) + "'");
      spec.*(it->real) = *v;
    } else if (it->integer) {
      const auto v = detail::to_integer(value);
      if (!v) throw DataError("scene spec: bad integer for '" + std::string(key) + "'");
      spec.*(it->integer) = static_cast<int>(*v);
    } else if (value == "linear") {
      spec.motion = SceneMotion::Linear;
    } else if (value == "crossing") {
      spec.motion = SceneMotion::Crossing;
    } else {
      throw DataError("scene spec: motion must be 'linear' or 'crossing'");
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return spec;
}

SyntheticSequence generate_synthetic(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution drop(spec.dropout);

  const bool crossing = spec.motion == SceneMotion::Crossing;
  const double w = spec.box_width, h = spec.box_height;
  const auto base = identity_vectors(spec);

  SyntheticSequence seq;
  seq.embeddings.dim = static_cast<std::uint32_t>(spec.embedding_dim);
  for (int i = 0; i < spec.identities; ++i) seq.gt.push_back(Trajectory{i + 1, {}});

  auto center_of = [&](int i, int t) -> std::pair<double, double> {
    if (crossing && i < 2) return {crossing_x(spec, t, i == 0 ? -1.0 : 1.0), h};
    const int lane = crossing ? i - 1 : i;
    const double y = h + lane * spec.lane_spacing;
    const double dir = lane % 2 == 0 ? 1.0 : -1.0;
    const double x0 = dir > 0 ? 2.0 * w : spec.scene_width - 2.0 * w;
    return {x0 + dir * spec.speed * (t - 1), y};
  };

  for (int t = 1; t <= spec.frames; ++t) {
    FrameInput frame;
    frame.frame = t;
    std::vector<std::pair<Detection, int>> dets;
    for (int i = 0; i < spec.identities; ++i) {
      const auto [cx, cy] = center_of(i, t);
      const BBox truth(cx - 0.5 * w, cy - 0.5 * h, w, h);
      seq.gt[static_cast<std::size_t>(i)].samples.emplace(t, TrajectorySample{truth, 1.0});

      // Draw every random number regardless of outcome so one identity's
      // dropout does not shift the others' noise.
      const double nx = gauss(rng), ny = gauss(rng), nw = gauss(rng), nh = gauss(rng);
      Eigen::VectorXd noise(spec.embedding_dim);
      for (int k = 0; k < spec.embedding_dim; ++k) noise(k) = gauss(rng);
      const bool dropped = drop(rng);
      const bool in_window = crossing && i < 2 && t >= spec.crossing_window_start &&
                             t <= spec.crossing_window_end;
      if (dropped || in_window) continue;

      const double s = spec.position_noise;
      const double dw = std::max(1.0, w + s * nw), dh = std::max(1.0, h + s * nh);
      const BBox box(cx + s * nx - 0.5 * dw, cy + s * ny - 0.5 * dh, dw, dh);
      Eigen::VectorXd emb = base[static_cast<std::size_t>(i)] + spec.embedding_noise * noise;
      dets.emplace_back(Detection{box, spec.score, Embedding(emb)}, i);
    }
    std::shuffle(dets.begin(), dets.end(), rng);
    for (std::size_t j = 0; j < dets.size(); ++j) {
      const auto& d = dets[j].first;
      EmbeddingRecord rec;
      rec.frame = static_cast<std::uint32_t>(t);
      rec.index = static_cast<std::uint32_t>(j);
      for (Eigen::Index k = 0; k < d.embedding->dim(); ++k) rec.values.push_back(static_cast<float>(d.embedding->values()(k)));
      seq.embeddings.records.push_back(std::move(rec));
      frame.detections.push_back(d);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

void write_synthetic(const SyntheticSequence& seq, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  write_detections(seq.frames, dir / "det.txt");
  write_embeddings_binary(dir / "emb.bin", seq.embeddings);
  write_ground_truth(seq.gt, dir / "gt.txt");
}

}  // namespace stc
