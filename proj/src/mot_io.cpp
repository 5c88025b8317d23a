#include "stc/mot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stc/errors.hpp"
#include "text_util.hpp"

namespace stc {

namespace {

using detail::split;
using detail::to_double;
using detail::to_integer;
using detail::trim;

constexpr std::array<char, 4> kEmbeddingMagic = {'E', 'M', 'B', '1'};
constexpr int kPedestrianClass = 1;
const std::set<int> kDistractorClasses = {2, 7, 8, 12};

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void check_malformed(const LoadStats& stats, const std::filesystem::path& path) {
  if (stats.malformed * 100 > stats.rows) {
    throw DataError(path.string() + ": " + std::to_string(stats.malformed) + " of " +
                    std::to_string(stats.rows) + " rows are malformed (limit 1%)");
  }
}

// frame, id, left, top, width, height and the remaining numeric fields.
struct MotRow {
  long long frame;
  long long id;
  double left, top, width, height;
  std::vector<double> rest;
};

std::optional<MotRow> parse_mot_row(std::string_view line, std::size_t min_fields) {
  const auto fields = split(line, ',');
  if (fields.size() < min_fields) return std::nullopt;
  MotRow row{};
  const auto frame = to_integer(fields[0]);
  const auto id = to_integer(fields[1]);
  if (!frame || !id || *frame < 1) return std::nullopt;
  row.frame = *frame;
  row.id = *id;
  double* coords[] = {&row.left, &row.top, &row.width, &row.height};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto v = to_double(fields[2 + k]);
    if (!v) return std::nullopt;
    *coords[k] = *v;
  }
  for (std::size_t k = 6; k < fields.size(); ++k) {
    const auto v = to_double(fields[k]);
    if (!v) return std::nullopt;
    row.rest.push_back(*v);
  }
  return row;
}

template <class T>
void put_le(std::string& out, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.append(bytes.data(), bytes.size());
}

template <class T>
T get_le(const char* p) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

EmbeddingTable parse_binary_embeddings(const std::string& data, const std::filesystem::path& path) {
  constexpr std::size_t kHeader = 12;
  if (data.size() < kHeader) throw DataError(path.string() + ": truncated embedding header");
  EmbeddingTable table;
  table.dim = get_le<std::uint32_t>(data.data() + 4);
  const auto count = get_le<std::uint32_t>(data.data() + 8);
  if (table.dim == 0) throw DataError(path.string() + ": embedding dimension is zero");
  const std::size_t record_size = 8 + 4 * static_cast<std::size_t>(table.dim);
  if (data.size() != kHeader + record_size * count) {
    throw DataError(path.string() + ": size does not match " + std::to_string(count) +
                    " records of dimension " + std::to_string(table.dim));
  }
  table.records.reserve(count);
  const char* p = data.data() + kHeader;
  for (std::uint32_t r = 0; r < count; ++r, p += record_size) {
    EmbeddingRecord rec;
    rec.frame = get_le<std::uint32_t>(p);
    rec.index = get_le<std::uint32_t>(p + 4);
    rec.values.resize(table.dim);
    for (std::uint32_t k = 0; k < table.dim; ++k) rec.values[k] = get_le<float>(p + 8 + 4 * k);
    table.records.push_back(std::move(rec));
  }
  return table;
}

EmbeddingTable parse_text_embeddings(const std::string& data, const std::filesystem::path& path) {
  std::istringstream in(data);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty embedding file");
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "frame" || header[1] != "index") {
    throw DataError(path.string() + ": expected header 'frame,index,e0,...'");
  }
  EmbeddingTable table;
  table.dim = static_cast<std::uint32_t>(header.size() - 2);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.dim) + " embedding values, got " +
                      std::to_string(fields.size() < 2 ? 0 : fields.size() - 2));
    }
    const auto frame = to_integer(fields[0]);
    const auto index = to_integer(fields[1]);
    if (!frame || !index || *frame < 0 || *index < 0) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad frame/index");
    }
    EmbeddingRecord rec;
    rec.frame = static_cast<std::uint32_t>(*frame);
    rec.index = static_cast<std::uint32_t>(*index);
    for (std::size_t k = 2; k < fields.size(); ++k) {
      const auto v = to_double(fields[k]);
      if (!v) throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad embedding value");
      rec.values.push_back(static_cast<float>(*v));
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

}  // namespace

std::optional<DetectionRow> parse_detection_row(std::string_view line) {
  const auto row = parse_mot_row(line, 7);
  if (!row) return std::nullopt;
  const double score = row->rest.at(0);
  DetectionRow out{static_cast<int>(row->frame), 0,
                   BBox(row->left, row->top, row->width, row->height), score};
  return out;
}

std::vector<DetectionRow> read_detections(const std::filesystem::path& path, LoadStats& stats) {
  std::vector<DetectionRow> rows;
  std::map<int, int> per_frame;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    ++stats.rows;
    const auto parsed = parse_mot_row(line, 7);
    if (!parsed) {
      ++stats.malformed;
      continue;
    }
    const int frame = static_cast<int>(parsed->frame);
    const int index = per_frame[frame]++;
    if (!(parsed->width > 0.0) || !(parsed->height > 0.0)) {
      ++stats.invalid_boxes;
      continue;
    }
    rows.push_back({frame, index, BBox(parsed->left, parsed->top, parsed->width, parsed->height),
                    parsed->rest.at(0)});
  }
  check_malformed(stats, path);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DetectionRow& a, const DetectionRow& b) { return a.frame < b.frame; });
  return rows;
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 4 && std::equal(kEmbeddingMagic.begin(), kEmbeddingMagic.end(), data.begin())) {
    return parse_binary_embeddings(data, path);
  }
  return parse_text_embeddings(data, path);
}

void write_embeddings_binary(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::string out(kEmbeddingMagic.begin(), kEmbeddingMagic.end());
  put_le<std::uint32_t>(out, table.dim);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.records.size()));
  for (const auto& rec : table.records) {
    if (rec.values.size() != table.dim) throw std::invalid_argument("embedding record dimension mismatch");
    put_le<std::uint32_t>(out, rec.frame);
    put_le<std::uint32_t>(out, rec.index);
    for (float v : rec.values) put_le<float>(out, v);
  }
  write_text_file(path, out);
}

void write_embeddings_text(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::string out = "frame,index";
  for (std::uint32_t k = 0; k < table.dim; ++k) out += ",e" + std::to_string(k);
  out += '\n';
  for (const auto& rec : table.records) {
    if (rec.values.size() != table.dim) throw std::invalid_argument("embedding record dimension mismatch");
    out += std::to_string(rec.frame) + ',' + std::to_string(rec.index);
    for (float v : rec.values) out += ',' + detail::shortest(static_cast<double>(v));
    out += '\n';
  }
  write_text_file(path, out);
}

GroundTruth read_ground_truth(const std::filesystem::path& path, LoadStats& stats) {
  GroundTruth gt;
  std::map<int, Trajectory> tracks;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    ++stats.rows;
    const auto row = parse_mot_row(line, 6);
    if (!row) {
      ++stats.malformed;
      continue;
    }
    if (!(row->width > 0.0) || !(row->height > 0.0)) {
      ++stats.invalid_boxes;
      continue;
    }
    const double active = row->rest.size() > 0 ? row->rest[0] : 1.0;
    const int cls = row->rest.size() > 1 ? static_cast<int>(row->rest[1]) : kPedestrianClass;
    const double visibility = row->rest.size() > 2 ? row->rest[2] : 1.0;
    const BBox box(row->left, row->top, row->width, row->height);
    const int frame = static_cast<int>(row->frame);
    if (kDistractorClasses.count(cls)) {
      gt.ignore_regions[frame].push_back(box);
      continue;
    }
    if (cls != kPedestrianClass || active == 0.0) continue;
    auto& traj = tracks[static_cast<int>(row->id)];
    traj.id = static_cast<int>(row->id);
    if (!traj.samples.emplace(frame, TrajectorySample{box, 1.0, cls, visibility}).second) {
      throw DataError(path.string() + ": id " + std::to_string(row->id) + " appears twice in frame " +
                      std::to_string(frame));
    }
  }
  check_malformed(stats, path);
  for (auto& [id, t] : tracks) gt.tracks.push_back(std::move(t));
  return gt;
}

TrajectorySet read_results(const std::filesystem::path& path) {
  LoadStats stats;
  std::map<int, Trajectory> tracks;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    ++stats.rows;
    const auto row = parse_mot_row(line, 6);
    if (!row || !(row->width > 0.0) || !(row->height > 0.0)) {
      ++stats.malformed;
      continue;
    }
    auto& traj = tracks[static_cast<int>(row->id)];
    traj.id = static_cast<int>(row->id);
    const double score = row->rest.empty() ? 1.0 : row->rest[0];
    const int frame = static_cast<int>(row->frame);
    if (!traj.samples.emplace(frame, TrajectorySample{BBox(row->left, row->top, row->width, row->height), score}).second) {
      throw DataError(path.string() + ": id " + std::to_string(row->id) + " appears twice in frame " +
                      std::to_string(frame));
    }
  }
  check_malformed(stats, path);
  TrajectorySet out;
  for (auto& [id, t] : tracks) out.push_back(std::move(t));
  return out;
}

Sequence load_sequence(const std::filesystem::path& det_path,
                       const std::optional<std::filesystem::path>& emb_path,
                       const std::optional<std::filesystem::path>& gt_path) {
  Sequence seq;
  const auto rows = read_detections(det_path, seq.stats);

  std::map<std::pair<std::uint32_t, std::uint32_t>, const EmbeddingRecord*> by_key;
  EmbeddingTable table;
  if (emb_path) {
    table = read_embeddings(*emb_path);
    seq.embedding_dim = table.dim;
    for (const auto& rec : table.records) {
      if (!by_key.emplace(std::make_pair(rec.frame, rec.index), &rec).second) {
        throw DataError(emb_path->string() + ": duplicate record for frame " +
                        std::to_string(rec.frame) + " index " + std::to_string(rec.index));
      }
    }
  }

  const int last_frame = rows.empty() ? 0 : rows.back().frame;
  seq.frames.resize(static_cast<std::size_t>(last_frame));
  for (int f = 1; f <= last_frame; ++f) seq.frames[static_cast<std::size_t>(f - 1)].frame = f;
  std::size_t joined_or_rejected = 0;
  for (const auto& row : rows) {
    Detection d{row.box, row.score, std::nullopt};
    auto it = by_key.find({static_cast<std::uint32_t>(row.frame), static_cast<std::uint32_t>(row.index_in_frame)});
    if (it != by_key.end()) {
      ++joined_or_rejected;
      std::vector<double> v(it->second->values.begin(), it->second->values.end());
      try {
        d.embedding = Embedding(v);
        ++seq.stats.embeddings_joined;
      } catch (const std::invalid_argument&) {
        ++seq.stats.embeddings_rejected;
      }
    }
    seq.frames[static_cast<std::size_t>(row.frame - 1)].detections.push_back(std::move(d));
  }
  seq.stats.embeddings_rejected += by_key.size() - joined_or_rejected;

  if (gt_path) seq.gt = read_ground_truth(*gt_path, seq.stats);
  return seq;
}

std::string format_results(const TrajectorySet& trajectories) {
  std::vector<std::tuple<int, int, const TrajectorySample*>> rows;
  for (const auto& t : trajectories) {
    for (const auto& [frame, s] : t.samples) rows.emplace_back(frame, t.id, &s);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::string out;
  for (const auto& [frame, id, s] : rows) {
    out += std::to_string(frame) + ',' + std::to_string(id) + ',' + detail::fixed2(s->box.left()) + ',' +
           detail::fixed2(s->box.top()) + ',' + detail::fixed2(s->box.width()) + ',' +
           detail::fixed2(s->box.height()) + ',' + detail::fixed2(s->score) + ",-1,-1,-1\n";
  }
  return out;
}

void write_results(const TrajectorySet& trajectories, const std::filesystem::path& path) {
  write_text_file(path, format_results(trajectories));
}

void write_detections(const std::vector<FrameInput>& frames, const std::filesystem::path& path) {
  std::string out;
  for (const auto& f : frames) {
    for (const auto& d : f.detections) {
      out += std::to_string(f.frame) + ",-1," + detail::fixed2(d.box.left()) + ',' +
             detail::fixed2(d.box.top()) + ',' + detail::fixed2(d.box.width()) + ',' +
             detail::fixed2(d.box.height()) + ',' + detail::fixed2(d.score) + ",-1,-1,-1\n";
    }
  }
  write_text_file(path, out);
}

void write_ground_truth(const TrajectorySet& gt, const std::filesystem::path& path) {
  std::vector<std::tuple<int, int, const TrajectorySample*>> rows;
  for (const auto& t : gt) {
    for (const auto& [frame, s] : t.samples) rows.emplace_back(frame, t.id, &s);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::string out;
  for (const auto& [frame, id, s] : rows) {
    out += std::to_string(frame) + ',' + std::to_string(id) + ',' + detail::fixed2(s->box.left()) + ',' +
           detail::fixed2(s->box.top()) + ',' + detail::fixed2(s->box.width()) + ',' +
           detail::fixed2(s->box.height()) + ",1,1,1\n";
  }
  write_text_file(path, out);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace stc
