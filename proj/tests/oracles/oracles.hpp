#pragma once

// Independent reference implementations used by the tests. They share no
// code with the library beyond plain data types and favor explicit loops
// over vectorized expressions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---- gop --------------------------------------------------------------------

/// posteriors[t][s]; state_phone[s].
inline double phone_log_posterior(const std::vector<std::vector<double>>& posteriors,
                                  const std::vector<std::string>& state_phone,
                                  const std::string& phone, int start, int end) {
  double total = 0.0;
  for (int t = start; t < end; ++t) {
    double mass = 0.0;
    for (std::size_t s = 0; s < state_phone.size(); ++s) {
      if (state_phone[s] == phone) mass = mass + posteriors[t][s];
    }
    if (mass == 0.0) return -std::numeric_limits<double>::infinity();
    total = total + std::log(mass);
  }
  return total / static_cast<double>(end - start);
}

struct Gop {
  double log_posterior;
  double gop;
  std::string best;
};

inline Gop gop_score(const std::vector<std::vector<double>>& posteriors,
                     const std::vector<std::string>& state_phone,
                     const std::string& canonical, int start, int end,
                     const std::vector<std::string>& pool) {
  Gop out{phone_log_posterior(posteriors, state_phone, canonical, start, end), 0.0, ""};
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& q : pool) {
    const double v = phone_log_posterior(posteriors, state_phone, q, start, end);
    if (!found || v > best || (v == best && q < out.best)) {
      best = v;
      out.best = q;
      found = true;
    }
  }
  out.gop = out.log_posterior == best ? 0.0 : out.log_posterior - best;
  return out;
}

// ---- average precision --------------------------------------------------------

struct Pair {
  double distance;
  bool same;
};

/// Sweeps every distinct distance as an acceptance threshold (accept
/// d <= t), recounting accepted pairs from scratch at each one, and adds the
/// precision at every threshold where recall rises; the sum over P is the
/// area under the step precision-recall curve. Thresholds are visited in
/// ascending order. Requires tie-free distances.
inline double threshold_sweep_ap(const std::vector<Pair>& pairs) {
  std::set<double> thresholds;
  std::size_t positives = 0;
  for (const auto& p : pairs) {
    thresholds.insert(p.distance);
    if (p.same) ++positives;
  }
  double sum = 0.0;
  std::size_t prev_hits = 0;
  for (double t : thresholds) {
    std::size_t accepted = 0, hits = 0;
    for (const auto& p : pairs) {
      if (p.distance <= t) {
        ++accepted;
        if (p.same) ++hits;
      }
    }
    if (hits > prev_hits) {
      sum += static_cast<double>(hits) / static_cast<double>(accepted);
    }
    prev_hits = hits;
  }
  return sum / static_cast<double>(positives);
}

// ---- rationals ----------------------------------------------------------------

struct Fraction {
  std::int64_t num;
  std::int64_t den;

  static Fraction make(std::int64_t n, std::int64_t d) {
    const std::int64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }
  friend Fraction operator+(Fraction a, Fraction b) {
    return make(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Fraction operator-(Fraction a, Fraction b) {
    return make(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Fraction operator*(Fraction a, Fraction b) {
    return make(a.num * b.num, a.den * b.den);
  }
  friend Fraction operator/(Fraction a, Fraction b) {
    return make(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// ---- cosine / losses ----------------------------------------------------------

inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double hinge(double m, double pos, double neg) { return std::max(0.0, m + pos - neg); }

// ---- adadelta -----------------------------------------------------------------

struct ScalarAdadelta {
  double rho, eps, lr;
  double eg2 = 0.0, edx2 = 0.0;

  double step(double g) {
    eg2 = rho * eg2 + (1.0 - rho) * g * g;
    const double dx = -lr * std::sqrt(edx2 + eps) / std::sqrt(eg2 + eps) * g;
    edx2 = rho * edx2 + (1.0 - rho) * dx * dx;
    return dx;
  }
};

// ---- lstm ---------------------------------------------------------------------

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// One LSTM direction over x[t][k] with gate rows [i; f; g; o] of W (4h x in),
/// U (4h x h), b (4h), given as nested vectors. Returns h[t][k].
inline std::vector<std::vector<double>> lstm_direction(
    const std::vector<std::vector<double>>& W, const std::vector<std::vector<double>>& U,
    const std::vector<double>& b, const std::vector<std::vector<double>>& x, bool reverse) {
  const std::size_t h = U[0].size();
  const std::size_t T = x.size();
  std::vector<std::vector<double>> out(T, std::vector<double>(h, 0.0));
  std::vector<double> hp(h, 0.0), cp(h, 0.0);
  for (std::size_t step = 0; step < T; ++step) {
    const std::size_t t = reverse ? T - 1 - step : step;
    std::vector<double> a(4 * h, 0.0);
    for (std::size_t r = 0; r < 4 * h; ++r) {
      double v = b[r];
      for (std::size_t k = 0; k < x[t].size(); ++k) v += W[r][k] * x[t][k];
      for (std::size_t k = 0; k < h; ++k) v += U[r][k] * hp[k];
      a[r] = v;
    }
    for (std::size_t k = 0; k < h; ++k) {
      const double i = sigmoid(a[k]);
      const double f = sigmoid(a[h + k]);
      const double g = std::tanh(a[2 * h + k]);
      const double o = sigmoid(a[3 * h + k]);
      cp[k] = f * cp[k] + i * g;
      hp[k] = o * std::tanh(cp[k]);
      out[t][k] = hp[k];
    }
  }
  return out;
}

}  // namespace oracle
