#include "phonemv/train/sampling.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/rng.hpp"

#include <algorithm>
#include <map>

namespace phonemv::train {

namespace {

using Groups = std::map<PhoneId, std::vector<std::size_t>>;

Groups group_by_label(const corpus::SegmentSet& set) {
  Groups groups;
  for (std::size_t i = 0; i < set.size(); ++i) groups[set.at(i).spoken].push_back(i);
  return groups;
}

std::size_t uniform_index(util::Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> u(0, n - 1);
  return u(rng);
}

// The k-th index (in set order) whose label is not `label`.
std::size_t mismatched(const corpus::SegmentSet& set, const PhoneId& label,
                       std::size_t k) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.at(i).spoken == label) continue;
    if (k-- == 0) return i;
  }
  throw ValidationError("no segment with a label other than '" + label + "'");
}

}  // namespace

std::vector<Triplet> sample_triplets(const corpus::SegmentSet& set,
                                     std::uint64_t seed,
                                     const PairSampling& sampling) {
  const auto groups = group_by_label(set);
  if (groups.size() < 2) {
    throw ValidationError("sample_triplets: need at least two distinct labels");
  }
  util::Rng rng(seed);
  std::vector<Triplet> out;
  bool any_pair = false;
  for (const auto& [label, members] : groups) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = sampling.ordered ? 0 : i + 1; j < members.size(); ++j) {
        if (i != j) pairs.emplace_back(members[i], members[j]);
      }
    }
    if (pairs.empty()) continue;
    any_pair = true;
    if (sampling.pairs_per_label > 0 && pairs.size() > sampling.pairs_per_label) {
      std::shuffle(pairs.begin(), pairs.end(), rng);
      pairs.resize(sampling.pairs_per_label);
      std::sort(pairs.begin(), pairs.end());
    }
    const std::size_t negatives = set.size() - members.size();
    for (const auto& [a, p] : pairs) {
      out.push_back({a, p, mismatched(set, label, uniform_index(rng, negatives))});
    }
  }
  if (!any_pair) {
    throw ValidationError("sample_triplets: no label has two segments");
  }
  return out;
}

std::vector<CrossViewItem> sample_crossview(const corpus::SegmentSet& set,
                                            const std::string& view,
                                            std::uint64_t seed) {
  for (const auto& s : set.segments()) {
    for (const char* v : {corpus::kAcousticView, view.c_str()}) {
      if (!s.views.contains(v)) {
        throw ResolutionError(s.id, std::string("missing view '") + v + "'");
      }
    }
  }
  const auto groups = group_by_label(set);
  if (groups.size() < 2) {
    throw ValidationError("sample_crossview: need at least two distinct labels");
  }
  std::vector<PhoneId> labels;
  for (const auto& [label, members] : groups) labels.push_back(label);

  const bool per_label = view == corpus::kAttributeView;
  util::Rng rng(seed);
  std::vector<CrossViewItem> out;
  out.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const PhoneId& label = set.at(i).spoken;
    const std::size_t negatives = set.size() - groups.at(label).size();
    CrossViewItem item{i, i, 0, 0};
    if (per_label) {
      std::size_t k = uniform_index(rng, labels.size() - 1);
      if (labels[k] >= label) ++k;
      const auto& members = groups.at(labels[k]);
      item.y_neg = members[uniform_index(rng, members.size())];
    } else {
      item.y_neg = mismatched(set, label, uniform_index(rng, negatives));
    }
    item.x_neg = mismatched(set, label, uniform_index(rng, negatives));
    out.push_back(item);
  }
  return out;
}

}  // namespace phonemv::train
