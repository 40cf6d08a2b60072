#pragma once

#include "phonemv/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phonemv::corpus {

inline constexpr const char* kAcousticView = "acoustic";
inline constexpr const char* kBottleneckView = "bottleneck";
inline constexpr const char* kAttributeView = "attribute";

bool is_known_view(const std::string& view);

/// One aligned phone occurrence. Views are stored as paths relative to the
/// manifest directory and read on demand.
struct PhoneSegment {
  std::string id;
  PhoneId spoken;
  PhoneId canonical;
  std::string speaker;
  Split split = Split::kTrain;
  std::map<std::string, std::string> views;

  bool correct() const { return spoken == canonical; }
};

/// Immutable after load; safe to share across threads for reading.
class SegmentSet {
 public:
  SegmentSet() = default;
  SegmentSet(std::vector<PhoneSegment> segments, std::string root);

  const std::vector<PhoneSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const std::string& root() const { return root_; }

  const PhoneSegment& at(std::size_t i) const { return segments_.at(i); }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Reads the named view of a segment. Throws ResolutionError naming the
  /// segment when the view is absent or its file is missing/unreadable.
  FeatureMatrix load_view(const PhoneSegment& segment,
                          const std::string& view) const;

  std::string view_path(const PhoneSegment& segment,
                        const std::string& view) const;

  /// Segments of one split, in manifest order.
  SegmentSet filter(Split split) const;

 private:
  std::vector<PhoneSegment> segments_;
  std::map<std::string, std::size_t> index_;
  std::string root_;
};

/// Parses JSON-lines manifest text. Throws ParseError with a 1-based line
/// number for malformed records and ValidationError for duplicate ids.
SegmentSet parse_manifest(const std::string& text, const std::string& root);

/// Loads `path` (a manifest file, or a directory holding manifest.jsonl).
SegmentSet load_manifest(const std::string& path);

/// Canonical JSON-lines serialization (sorted keys, one record per line).
std::string serialize_manifest(const std::vector<PhoneSegment>& segments);

std::string manifest_path_for(const std::string& path);

}  // namespace phonemv::corpus
