#include "phonemv/eval/discrimination.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/net/cosine.hpp"
#include "phonemv/util/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <tuple>

namespace phonemv::eval {

namespace {

// Maps k in [0, n(n-1)/2) to the k-th pair (i < j) in row-major order.
std::pair<std::size_t, std::size_t> pair_at(std::uint64_t k, std::size_t n) {
  std::size_t i = 0;
  std::uint64_t row = n - 1;
  while (k >= row) {
    k -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + static_cast<std::size_t>(k)};
}

}  // namespace

std::vector<ScoredPair> discrimination_pairs(const corpus::SegmentSet& set,
                                             const std::vector<Embedding>& embeddings,
                                             std::size_t max_pairs,
                                             std::uint64_t seed) {
  const std::size_t n = set.size();
  if (n < 2) throw ValidationError("discrimination_pairs: fewer than 2 segments");
  if (embeddings.size() != n) {
    throw ValidationError("discrimination_pairs: embeddings do not cover the set");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<std::uint64_t> chosen;
  if (total <= max_pairs) {
    chosen.resize(total);
    std::iota(chosen.begin(), chosen.end(), std::uint64_t{0});
  } else {
    // Floyd's sampling of max_pairs distinct indices.
    util::Rng rng(seed);
    std::vector<std::uint64_t> picked;
    picked.reserve(max_pairs);
    std::vector<bool> taken(total, false);
    for (std::uint64_t j = total - max_pairs; j < total; ++j) {
      std::uniform_int_distribution<std::uint64_t> u(0, j);
      const std::uint64_t t = u(rng);
      const std::uint64_t pick = taken[t] ? j : t;
      taken[pick] = true;
      picked.push_back(pick);
    }
    std::sort(picked.begin(), picked.end());
    chosen = std::move(picked);
  }

  std::vector<ScoredPair> out;
  out.reserve(chosen.size());
  std::uint64_t k_prev = 0;
  std::size_t i = 0, j = 1;
  bool first = true;
  for (const auto k : chosen) {
    if (first || k - k_prev > 1) {
      std::tie(i, j) = pair_at(k, n);
    } else if (++j == n) {
      ++i;
      j = i + 1;
    }
    first = false;
    k_prev = k;
    const auto& sa = set.at(i);
    const auto& sb = set.at(j);
    out.push_back({sa.id, sb.id, cosine_distance(embeddings[i], embeddings[j]),
                   sa.spoken == sb.spoken});
  }
  return out;
}

std::vector<ScoredPair> discrimination_pairs(
    const corpus::SegmentSet& set, const std::map<std::string, Embedding>& embeddings,
    std::size_t max_pairs, std::uint64_t seed) {
  std::vector<Embedding> aligned;
  aligned.reserve(set.size());
  for (const auto& s : set.segments()) {
    const auto it = embeddings.find(s.id);
    if (it == embeddings.end()) {
      throw ResolutionError(s.id, "no embedding for segment");
    }
    aligned.push_back(it->second);
  }
  return discrimination_pairs(set, aligned, max_pairs, seed);
}

std::vector<ScoredPair> rank_pairs(std::vector<ScoredPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& x, const ScoredPair& y) {
    return std::tie(x.distance, x.a, x.b) < std::tie(y.distance, y.a, y.b);
  });
  return pairs;
}

double average_precision(const std::vector<ScoredPair>& pairs) {
  const auto ranked = rank_pairs(pairs);
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (!ranked[k].same_label) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  if (hits == 0) throw ValidationError("average_precision: no same-label pairs");
  return sum / static_cast<double>(hits);
}

std::vector<PrPoint> pr_curve(const std::vector<ScoredPair>& pairs) {
  const auto ranked = rank_pairs(pairs);
  const auto positives = static_cast<std::size_t>(
      std::count_if(ranked.begin(), ranked.end(),
                    [](const ScoredPair& p) { return p.same_label; }));
  if (positives == 0) throw ValidationError("pr_curve: no same-label pairs");
  std::vector<PrPoint> out;
  out.reserve(ranked.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (ranked[k].same_label) ++hits;
    out.push_back({ranked[k].distance,
                   static_cast<double>(hits) / static_cast<double>(k + 1),
                   static_cast<double>(hits) / static_cast<double>(positives)});
  }
  return out;
}

std::string pr_curve_csv(const std::vector<PrPoint>& curve) {
  std::string out = "threshold,precision,recall\n";
  char line[96];
  for (const auto& p : curve) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.threshold,
                  p.precision, p.recall);
    out += line;
  }
  return out;
}

}  // namespace phonemv::eval
