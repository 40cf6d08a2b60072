#pragma once

#include "phonemv/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace phonemv::eval {

inline constexpr double kDefaultVerifyThreshold = 0.4;

struct PhoneTemplate {
  PhoneId phone;
  Embedding centroid;
  std::size_t support = 0;
};

/// Per-phone mean embedding. Each group is summed in lexicographic order of
/// its vectors, so the centroid does not depend on input order. Output is
/// sorted by phone.
std::vector<PhoneTemplate> build_templates(
    const std::map<PhoneId, std::vector<Embedding>>& groups);

enum class Strategy { kCentroid, kCrossView };

Strategy parse_strategy(const std::string& text);
const char* to_string(Strategy strategy);

/// Reference embedding per canonical phone.
using References = std::map<PhoneId, Embedding>;

References references_from(const std::vector<PhoneTemplate>& templates);

struct VerificationOutcome {
  std::string segment;
  PhoneId canonical;
  double distance = 0.0;
  Decision decision = Decision::kReject;
  bool truth_correct = true;
};

/// Accept iff cosine_distance(embedding, reference) < threshold.
Decision decide(double distance, double threshold);

/// Throws ResolutionError when `canonical` has no reference.
VerificationOutcome verify_segment(const std::string& segment,
                                   const Embedding& embedding,
                                   const PhoneId& canonical, bool truth_correct,
                                   const References& references,
                                   double threshold = kDefaultVerifyThreshold);

struct OutcomeCounts {
  std::uint64_t mis_accepted = 0;
  std::uint64_t mis_rejected = 0;
  std::uint64_t cor_accepted = 0;
  std::uint64_t cor_rejected = 0;

  std::uint64_t mispronounced() const { return mis_accepted + mis_rejected; }
  std::uint64_t correct() const { return cor_accepted + cor_rejected; }
  std::uint64_t total() const { return mispronounced() + correct(); }
};

/// FRR = mis_accepted / N_mis, FAR = cor_rejected / N_cor,
/// DA = (mis_rejected + cor_accepted) / total. A rate with a zero
/// denominator is empty rather than 0.
struct MetricsReport {
  OutcomeCounts counts;
  std::optional<double> frr;
  std::optional<double> far;
  double da = 0.0;
};

/// Throws ValidationError on an empty outcome list.
MetricsReport compute_metrics(const std::vector<VerificationOutcome>& outcomes);

/// rates (null when undefined), counts, threshold, strategy and the digest of
/// the checkpoint that produced the outcomes.
nlohmann::json metrics_json(const MetricsReport& report, double threshold,
                            const std::string& strategy,
                            const std::string& checkpoint_digest);

std::string outcomes_csv(const std::vector<VerificationOutcome>& outcomes);

}  // namespace phonemv::eval
