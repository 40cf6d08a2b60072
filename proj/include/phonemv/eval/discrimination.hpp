#pragma once

#include "phonemv/corpus/manifest.hpp"
#include "phonemv/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace phonemv::eval {

struct ScoredPair {
  std::string a;
  std::string b;
  double distance = 0.0;
  bool same_label = false;
};

inline constexpr std::size_t kDefaultMaxPairs = 20000;

/// Unordered segment pairs scored by cosine distance of their embeddings.
/// All C(n, 2) pairs when that is at most `max_pairs`, otherwise a seeded
/// sample of `max_pairs` distinct pairs. Output is in (i, j) index order.
/// `embeddings` is aligned with `set`.
std::vector<ScoredPair> discrimination_pairs(const corpus::SegmentSet& set,
                                             const std::vector<Embedding>& embeddings,
                                             std::size_t max_pairs,
                                             std::uint64_t seed);

std::vector<ScoredPair> discrimination_pairs(
    const corpus::SegmentSet& set, const std::map<std::string, Embedding>& embeddings,
    std::size_t max_pairs, std::uint64_t seed);

/// Pairs ranked by ascending distance, ties broken by (a, b).
std::vector<ScoredPair> rank_pairs(std::vector<ScoredPair> pairs);

/// (1/P) * sum over ranks k holding a same-label pair of precision@k.
/// Throws ValidationError when no pair is same-label.
double average_precision(const std::vector<ScoredPair>& pairs);

struct PrPoint {
  double threshold;
  double precision;
  double recall;
};

/// One point per rank position: accepting every pair up to and including
/// rank k (threshold = distance of pair k).
std::vector<PrPoint> pr_curve(const std::vector<ScoredPair>& pairs);

std::string pr_curve_csv(const std::vector<PrPoint>& curve);

}  // namespace phonemv::eval
