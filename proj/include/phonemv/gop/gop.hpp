#pragma once

#include "phonemv/types.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace phonemv::gop {

/// Log of zero posterior mass. -inf keeps max/ordering total (no NaN is ever
/// produced from it by this module).
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Frame-level posteriors over context-dependent states, each state tagged
/// with its central phone.
struct PosteriorLattice {
  RowMatrix<double> posteriors;      // frames x num_states
  std::vector<PhoneId> state_phone;  // one per column

  Eigen::Index frames() const { return posteriors.rows(); }
  Eigen::Index num_states() const { return posteriors.cols(); }

  /// Throws ValidationError unless the column map matches, every entry is in
  /// [0, 1] and every row sums to 1 within `tolerance`.
  void validate(double tolerance = 1e-6) const;

  /// Column indices whose central phone is `phone`.
  std::vector<Eigen::Index> states_of(const PhoneId& phone) const;
  /// Distinct phones with at least one state, sorted.
  std::vector<PhoneId> phones() const;
};

/// Half-open frame interval [start, end) of one aligned phone.
struct PhoneSpan {
  PhoneId phone;
  Eigen::Index start = 0;
  Eigen::Index end = 0;
};

struct GopResult {
  PhoneId phone;
  double log_posterior = kLogZero;
  double gop = 0.0;
  PhoneId best_competitor;
};

/// Mean over frames in [start, end) of log sum_{s in phone} P(s | o_t).
/// Returns kLogZero when any frame has zero mass for the phone. Throws
/// ValidationError on an invalid span or a phone without states.
double phone_log_posterior(const PosteriorLattice& lattice,
                           const PhoneId& phone, Eigen::Index start,
                           Eigen::Index end);

/// GOP of span.phone against `pool` (which must contain it):
/// log_posterior(canonical) - max_q log_posterior(q). Ties for the best
/// competitor go to the lexicographically smallest phone id.
GopResult gop_score(const PosteriorLattice& lattice, const PhoneSpan& span,
                    std::span<const PhoneId> pool);

inline constexpr double kDefaultGopThreshold = 0.1;

/// Accept iff gop >= -threshold. Throws ValidationError for threshold < 0.
Decision gop_verify(const GopResult& result,
                    double threshold = kDefaultGopThreshold);

}  // namespace phonemv::gop
