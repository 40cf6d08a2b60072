#include "phonemv/cli/run_manifest.hpp"

#include "phonemv/corpus/manifest.hpp"
#include "phonemv/util/binary_io.hpp"
#include "phonemv/util/digest.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace phonemv::cli {

namespace fs = std::filesystem;

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_sha256"] = config_sha256;
  j["corpus_sha256"] = corpus_sha256;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["tool_version"] = tool_version;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

std::string corpus_digest(const corpus::SegmentSet& set) {
  util::Sha256 h;
  h.update(corpus::serialize_manifest(set.segments()));
  for (const auto& s : set.segments()) {
    for (const auto& [view, rel] : s.views) {
      h.update(rel);
      h.update(std::string(1, '\0'));
      h.update(util::read_file(set.view_path(s, view)));
    }
  }
  return h.hex_digest();
}

std::string file_digest(const std::string& path) {
  return util::sha256_hex(util::read_file(path));
}

OutputGuard::~OutputGuard() {
  if (committed_) return;
  std::error_code ec;
  for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
  for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove_all(*it, ec);
}

void OutputGuard::make_dir(const std::string& dir) {
  std::vector<fs::path> missing;
  for (fs::path p = fs::absolute(dir).lexically_normal(); !p.empty() && !fs::exists(p);
       p = p.parent_path()) {
    missing.push_back(p);
    if (p == p.parent_path()) break;
  }
  fs::create_directories(dir);
  if (!missing.empty()) dirs_.push_back(missing.back().string());
}

void OutputGuard::add(const std::string& path) { files_.push_back(path); }

void OutputGuard::add(const std::vector<std::string>& paths) {
  files_.insert(files_.end(), paths.begin(), paths.end());
}

}  // namespace phonemv::cli
