#include "phonemv/eval/verification.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/net/cosine.hpp"

#include <algorithm>
#include <cstdio>

namespace phonemv::eval {

std::vector<PhoneTemplate> build_templates(
    const std::map<PhoneId, std::vector<Embedding>>& groups) {
  std::vector<PhoneTemplate> out;
  out.reserve(groups.size());
  for (const auto& [phone, group] : groups) {
    if (group.empty()) {
      throw ValidationError("build_templates: no embeddings for phone '" + phone + "'");
    }
    std::vector<const Embedding*> order;
    order.reserve(group.size());
    for (const auto& e : group) {
      if (e.size() != group.front().size()) {
        throw ValidationError("build_templates: inconsistent embedding sizes for '" +
                              phone + "'");
      }
      order.push_back(&e);
    }
    std::sort(order.begin(), order.end(), [](const Embedding* x, const Embedding* y) {
      return std::lexicographical_compare(x->data(), x->data() + x->size(),
                                          y->data(), y->data() + y->size());
    });
    Embedding sum = Embedding::Zero(group.front().size());
    for (const auto* e : order) sum += *e;
    out.push_back({phone, sum / static_cast<double>(group.size()), group.size()});
  }
  return out;
}

Strategy parse_strategy(const std::string& text) {
  if (text == "centroid") return Strategy::kCentroid;
  if (text == "crossview") return Strategy::kCrossView;
  throw ValidationError("unknown strategy '" + text + "'");
}

const char* to_string(Strategy strategy) {
  return strategy == Strategy::kCentroid ? "centroid" : "crossview";
}

References references_from(const std::vector<PhoneTemplate>& templates) {
  References out;
  for (const auto& t : templates) out.emplace(t.phone, t.centroid);
  return out;
}

Decision decide(double distance, double threshold) {
  return distance < threshold ? Decision::kAccept : Decision::kReject;
}

VerificationOutcome verify_segment(const std::string& segment,
                                   const Embedding& embedding,
                                   const PhoneId& canonical, bool truth_correct,
                                   const References& references, double threshold) {
  const auto it = references.find(canonical);
  if (it == references.end()) {
    throw ResolutionError(segment, "no reference for canonical phone '" + canonical + "'");
  }
  VerificationOutcome out;
  out.segment = segment;
  out.canonical = canonical;
  out.distance = cosine_distance(embedding, it->second);
  out.decision = decide(out.distance, threshold);
  out.truth_correct = truth_correct;
  return out;
}

MetricsReport compute_metrics(const std::vector<VerificationOutcome>& outcomes) {
  if (outcomes.empty()) throw ValidationError("compute_metrics: no outcomes");
  MetricsReport r;
  auto& c = r.counts;
  for (const auto& o : outcomes) {
    const bool accepted = o.decision == Decision::kAccept;
    if (o.truth_correct) {
      ++(accepted ? c.cor_accepted : c.cor_rejected);
    } else {
      ++(accepted ? c.mis_accepted : c.mis_rejected);
    }
  }
  auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  };
  if (c.mispronounced() > 0) r.frr = ratio(c.mis_accepted, c.mispronounced());
  if (c.correct() > 0) r.far = ratio(c.cor_rejected, c.correct());
  r.da = ratio(c.mis_rejected + c.cor_accepted, c.total());
  return r;
}

nlohmann::json metrics_json(const MetricsReport& report, double threshold,
                            const std::string& strategy,
                            const std::string& checkpoint_digest) {
  auto rate = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  const auto& c = report.counts;
  return {{"frr", rate(report.frr)},
          {"far", rate(report.far)},
          {"da", report.da},
          {"counts",
           {{"mis_accepted", c.mis_accepted},
            {"mis_rejected", c.mis_rejected},
            {"cor_accepted", c.cor_accepted},
            {"cor_rejected", c.cor_rejected}}},
          {"threshold", threshold},
          {"strategy", strategy},
          {"checkpoint_sha256", checkpoint_digest}};
}

std::string outcomes_csv(const std::vector<VerificationOutcome>& outcomes) {
  std::string out = "segment,canonical,distance,decision,truth_correct\n";
  char num[32];
  for (const auto& o : outcomes) {
    std::snprintf(num, sizeof num, "%.17g", o.distance);
    out += o.segment + "," + o.canonical + "," + num + "," + to_string(o.decision) +
           "," + (o.truth_correct ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace phonemv::eval
