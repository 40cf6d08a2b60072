#pragma once

#include "phonemv/corpus/manifest.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phonemv::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kRunManifestJson = "run_manifest.json";

/// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string config_sha256;  // empty when the command took no config file
  std::string corpus_sha256;  // empty when the command read no corpus
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

/// SHA-256 over the manifest bytes and, in manifest order, every referenced
/// view file path and its bytes. Any changed byte changes the digest.
std::string corpus_digest(const corpus::SegmentSet& set);

std::string file_digest(const std::string& path);

/// Remembers files and directories a command creates so they can be removed
/// if the command fails part way.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard();

  /// Creates `dir` (and parents); records the ones that did not exist.
  void make_dir(const std::string& dir);
  void add(const std::string& path);
  void add(const std::vector<std::string>& paths);
  const std::vector<std::string>& files() const { return files_; }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> files_;
  std::vector<std::string> dirs_;
  bool committed_ = false;
};

}  // namespace phonemv::cli
