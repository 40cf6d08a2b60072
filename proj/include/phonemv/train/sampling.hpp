#pragma once

#include "phonemv/corpus/manifest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phonemv::train {

/// Indices into the SegmentSet the triplet was sampled from.
struct Triplet {
  std::size_t anchor;
  std::size_t positive;
  std::size_t negative;

  bool operator==(const Triplet&) const = default;
};

struct PairSampling {
  /// Same-label pairs kept per label per epoch; 0 keeps all.
  std::size_t pairs_per_label = 50;
  /// Enumerate (a, b) and (b, a) separately.
  bool ordered = false;
};

/// Every same-spoken-label pair (capped per label by a seeded subsample),
/// each with a uniformly drawn segment of a different label as negative.
/// Labels are visited in sorted order, pairs in index order.
/// Throws ValidationError when no label has two segments or only one label
/// exists.
std::vector<Triplet> sample_triplets(const corpus::SegmentSet& set,
                                     std::uint64_t seed,
                                     const PairSampling& sampling = {});

/// Indices into the SegmentSet. x_pos and y_pos are the same segment;
/// y_neg and x_neg carry a spoken label different from it.
struct CrossViewItem {
  std::size_t x_pos;
  std::size_t y_pos;
  std::size_t y_neg;
  std::size_t x_neg;

  bool operator==(const CrossViewItem&) const = default;
};

/// One item per segment, in set order. x_neg is drawn uniformly from all
/// mismatched segments. For the attribute view y_neg's label is drawn
/// uniformly from the other labels (the view is a per-label pattern); for
/// other views y_neg is drawn uniformly from all mismatched segments.
/// Throws ResolutionError when a segment lacks the acoustic or `view` view
/// and ValidationError when only one label is present.
std::vector<CrossViewItem> sample_crossview(const corpus::SegmentSet& set,
                                            const std::string& view,
                                            std::uint64_t seed);

}  // namespace phonemv::train
