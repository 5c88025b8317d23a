#include "stc/config.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stc/errors.hpp"
#include "stc/mot_io.hpp"
#include "text_util.hpp"

namespace stc {

namespace {

using detail::shortest;

struct Field {
  const char* key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, std::string_view)> set;
};

double need_double(std::string_view key, std::string_view v) {
  const auto d = detail::to_double(v);
  if (!d) throw DataError("config: '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return *d;
}

int need_int(std::string_view key, std::string_view v) {
  const auto i = detail::to_integer(v);
  if (!i) throw DataError("config: '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  return static_cast<int>(*i);
}

#define STC_DOUBLE_FIELD(name, member)                                          \
  Field {                                                                       \
    name, [](const PipelineConfig& c) { return shortest(c.member); },           \
        [](PipelineConfig& c, std::string_view v) { c.member = need_double(name, v); } \
  }
#define STC_INT_FIELD(name, member)                                             \
  Field {                                                                       \
    name, [](const PipelineConfig& c) { return std::to_string(c.member); },     \
        [](PipelineConfig& c, std::string_view v) { c.member = need_int(name, v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      STC_DOUBLE_FIELD("tau_high", tracker.tau_high),
      STC_DOUBLE_FIELD("tau_low", tracker.tau_low),
      STC_DOUBLE_FIELD("gate_emb", tracker.gate_emb),
      STC_DOUBLE_FIELD("gate_iou", tracker.gate_iou),
      STC_DOUBLE_FIELD("match_thr_first", tracker.match_thr_first),
      STC_DOUBLE_FIELD("match_thr_second", tracker.match_thr_second),
      STC_DOUBLE_FIELD("match_thr_recover", tracker.match_thr_recover),
      STC_DOUBLE_FIELD("ema_alpha", tracker.ema_alpha),
      STC_INT_FIELD("max_inactive_frames", tracker.max_inactive_frames),
      Field{"cost_mode", [](const PipelineConfig& c) { return to_string(c.tracker.cost_mode); },
            [](PipelineConfig& c, std::string_view v) {
              try {
                c.tracker.cost_mode = parse_cost_mode(std::string(v));
              } catch (const std::invalid_argument& e) {
                throw DataError(std::string("config: ") + e.what());
              }
            }},
      Field{"overlap_measure", [](const PipelineConfig& c) { return to_string(c.tracker.overlap); },
            [](PipelineConfig& c, std::string_view v) {
              try {
                c.tracker.overlap = parse_overlap_measure(std::string(v));
              } catch (const std::invalid_argument& e) {
                throw DataError(std::string("config: ") + e.what());
              }
            }},
      STC_DOUBLE_FIELD("min_output_height", tracker.min_output_height),
      STC_DOUBLE_FIELD("kalman_std_weight_position", tracker.kalman_std_weight_position),
      STC_DOUBLE_FIELD("kalman_std_weight_velocity", tracker.kalman_std_weight_velocity),
      STC_DOUBLE_FIELD("gsi_length_scale", gsi.kernel_length_scale),
      STC_DOUBLE_FIELD("gsi_observation_noise", gsi.observation_noise),
      STC_INT_FIELD("gsi_max_gap", gsi.max_gap),
      STC_DOUBLE_FIELD("link_threshold", link.threshold),
      STC_INT_FIELD("link_max_gap", link.max_gap),
  };
  return kFields;
}

#undef STC_DOUBLE_FIELD
#undef STC_INT_FIELD

}  // namespace

void PipelineConfig::validate() const {
  try {
    tracker.validate();
    gsi.validate();
    link.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

std::string serialize(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + '\n';
  return out;
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto& all = fields();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Field& f) { return key == f.key; });
    if (it == all.end()) throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw DataError("config: duplicate key '" + std::string(key) + "'");
    it->set(config, value);
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

}  // namespace stc
