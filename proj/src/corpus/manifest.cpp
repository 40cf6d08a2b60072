#include "phonemv/corpus/manifest.hpp"

#include "phonemv/corpus/feature_file.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

namespace phonemv::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_known_view(const std::string& view) {
  return view == kAcousticView || view == kBottleneckView ||
         view == kAttributeView;
}

SegmentSet::SegmentSet(std::vector<PhoneSegment> segments, std::string root)
    : segments_(std::move(segments)), root_(std::move(root)) {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto [it, inserted] = index_.emplace(segments_[i].id, i);
    if (!inserted) {
      throw ValidationError("duplicate segment id '" + segments_[i].id + "'");
    }
  }
}

std::optional<std::size_t> SegmentSet::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string SegmentSet::view_path(const PhoneSegment& segment,
                                  const std::string& view) const {
  auto it = segment.views.find(view);
  if (it == segment.views.end()) {
    throw ResolutionError(segment.id, "no '" + view + "' view");
  }
  return (fs::path(root_) / it->second).string();
}

FeatureMatrix SegmentSet::load_view(const PhoneSegment& segment,
                                    const std::string& view) const {
  const std::string path = view_path(segment, view);
  if (!fs::exists(path)) {
    throw ResolutionError(segment.id, "feature file '" + path + "' not found");
  }
  try {
    return read_feature_matrix(path);
  } catch (const ResolutionError&) {
    throw;
  } catch (const Error& e) {
    throw ResolutionError(segment.id, e.what());
  }
}

SegmentSet SegmentSet::filter(Split split) const {
  std::vector<PhoneSegment> out;
  for (const auto& s : segments_) {
    if (s.split == split) out.push_back(s);
  }
  return SegmentSet(std::move(out), root_);
}

namespace {

std::string require_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(std::string("missing or non-string field '") + key + "'",
                     line);
  }
  return it->get<std::string>();
}

PhoneSegment parse_record(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
  if (!j.is_object()) throw ParseError("record is not a JSON object", line);
  PhoneSegment s;
  s.id = require_string(j, "id", line);
  if (s.id.empty()) throw ParseError("empty id", line);
  s.spoken = require_string(j, "spoken", line);
  s.canonical = require_string(j, "canonical", line);
  s.speaker = require_string(j, "speaker", line);
  try {
    s.split = parse_split(require_string(j, "split", line));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line);
  }
  auto views = j.find("views");
  if (views == j.end() || !views->is_object() || views->empty()) {
    throw ParseError("missing or empty 'views' object", line);
  }
  for (const auto& [name, path] : views->items()) {
    if (!is_known_view(name)) {
      throw ParseError("unknown view '" + name + "'", line);
    }
    if (!path.is_string()) {
      throw ParseError("view '" + name + "' path is not a string", line);
    }
    s.views.emplace(name, path.get<std::string>());
  }
  return s;
}

}  // namespace

SegmentSet parse_manifest(const std::string& text, const std::string& root) {
  std::vector<PhoneSegment> segments;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto segment = parse_record(line, line_no);
    auto [it, inserted] = seen.emplace(segment.id, line_no);
    if (!inserted) {
      throw ValidationError("duplicate segment id '" + segment.id +
                            "' on lines " + std::to_string(it->second) +
                            " and " + std::to_string(line_no));
    }
    segments.push_back(std::move(segment));
  }
  return SegmentSet(std::move(segments), root);
}

std::string manifest_path_for(const std::string& path) {
  if (fs::is_directory(path)) return (fs::path(path) / "manifest.jsonl").string();
  return path;
}

SegmentSet load_manifest(const std::string& path) {
  const std::string file = manifest_path_for(path);
  const std::string root = fs::path(file).parent_path().string();
  return parse_manifest(util::read_file(file), root.empty() ? "." : root);
}

std::string serialize_manifest(const std::vector<PhoneSegment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    json j;
    j["id"] = s.id;
    j["spoken"] = s.spoken;
    j["canonical"] = s.canonical;
    j["speaker"] = s.speaker;
    j["split"] = to_string(s.split);
    j["views"] = json::object();
    for (const auto& [name, path] : s.views) j["views"][name] = path;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace phonemv::corpus
