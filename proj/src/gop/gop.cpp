#include "phonemv/gop/gop.hpp"

#include "phonemv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace phonemv::gop {

void PosteriorLattice::validate(double tolerance) const {
  if (frames() < 1 || num_states() < 1) {
    throw ValidationError("lattice: empty posterior matrix");
  }
  if (static_cast<Eigen::Index>(state_phone.size()) != num_states()) {
    throw ValidationError("lattice: " + std::to_string(state_phone.size()) +
                          " state labels for " + std::to_string(num_states()) +
                          " columns");
  }
  if (!posteriors.allFinite() || posteriors.minCoeff() < 0.0 ||
      posteriors.maxCoeff() > 1.0) {
    throw ValidationError("lattice: posteriors must lie in [0, 1]");
  }
  for (Eigen::Index t = 0; t < frames(); ++t) {
    const double sum = posteriors.row(t).sum();
    if (std::abs(sum - 1.0) > tolerance) {
      throw ValidationError("lattice: frame " + std::to_string(t) +
                            " sums to " + std::to_string(sum));
    }
  }
}

std::vector<Eigen::Index> PosteriorLattice::states_of(
    const PhoneId& phone) const {
  std::vector<Eigen::Index> out;
  for (std::size_t s = 0; s < state_phone.size(); ++s) {
    if (state_phone[s] == phone) out.push_back(static_cast<Eigen::Index>(s));
  }
  return out;
}

std::vector<PhoneId> PosteriorLattice::phones() const {
  std::set<PhoneId> unique(state_phone.begin(), state_phone.end());
  return {unique.begin(), unique.end()};
}

double phone_log_posterior(const PosteriorLattice& lattice,
                           const PhoneId& phone, Eigen::Index start,
                           Eigen::Index end) {
  if (start < 0 || start >= end || end > lattice.frames()) {
    throw ValidationError("phone span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") outside lattice of " +
                          std::to_string(lattice.frames()) + " frames");
  }
  const auto states = lattice.states_of(phone);
  if (states.empty()) {
    throw ValidationError("phone '" + phone + "' has no lattice states");
  }
  double total = 0.0;
  for (Eigen::Index t = start; t < end; ++t) {
    double mass = 0.0;
    for (auto s : states) mass += lattice.posteriors(t, s);
    if (mass <= 0.0) return kLogZero;
    total += std::log(mass);
  }
  return total / static_cast<double>(end - start);
}

GopResult gop_score(const PosteriorLattice& lattice, const PhoneSpan& span,
                    std::span<const PhoneId> pool) {
  if (pool.empty()) throw ValidationError("gop_score: empty phone pool");
  if (std::find(pool.begin(), pool.end(), span.phone) == pool.end()) {
    throw ValidationError("gop_score: canonical phone '" + span.phone +
                          "' not in pool");
  }
  GopResult result;
  result.phone = span.phone;
  result.log_posterior =
      phone_log_posterior(lattice, span.phone, span.start, span.end);

  double best = kLogZero;
  bool have_best = false;
  for (const auto& q : pool) {
    const double value = phone_log_posterior(lattice, q, span.start, span.end);
    if (!have_best || value > best ||
        (value == best && q < result.best_competitor)) {
      best = value;
      result.best_competitor = q;
      have_best = true;
    }
  }
  // Canonical attains the maximum (including the all -inf case).
  result.gop =
      result.log_posterior == best ? 0.0 : result.log_posterior - best;
  return result;
}

Decision gop_verify(const GopResult& result, double threshold) {
  if (!(threshold >= 0.0)) {
    throw ValidationError("gop_verify: threshold must be >= 0");
  }
  return result.gop >= -threshold ? Decision::kAccept : Decision::kReject;
}

}  // namespace phonemv::gop
