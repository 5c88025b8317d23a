#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "stc/postprocess.hpp"
#include "stc/tracker.hpp"

namespace stc {

struct PipelineConfig {
  TrackerConfig tracker;
  GsiConfig gsi;
  LinkConfig link;

  void validate() const;
};

/// "key = value" per line, fixed key order, shortest round-trip numbers.
std::string serialize(const PipelineConfig& config);

/// Parses the same format; '#' starts a comment, missing keys keep their
/// defaults. Unknown keys, duplicate keys and bad values throw DataError.
PipelineConfig parse_config(std::string_view text);

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace stc
