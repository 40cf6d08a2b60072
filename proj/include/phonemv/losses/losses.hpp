#pragma once

#include "phonemv/net/cosine.hpp"

namespace phonemv::losses {

inline constexpr double kDefaultMargin = 0.4;

/// Hinge margin shared by all objectives.
class Margin {
 public:
  explicit Margin(double m = kDefaultMargin) : m_(m) {
    if (!(m >= 0.0)) throw ValidationError("margin must be >= 0");
  }
  double value() const { return m_; }

 private:
  double m_;
};

/// Single-view triplet loss max(0, m + d(anchor, positive) - d(anchor,
/// negative)) and its gradient with respect to each embedding.
template <typename Scalar>
struct TripletLoss {
  Scalar value = 0;
  Vector<Scalar> d_anchor;
  Vector<Scalar> d_positive;
  Vector<Scalar> d_negative;
};

/// Cross-view loss. Roles follow the acoustic net f and multi-source net g:
/// fx_pos = f(x+), gy_pos = g(y+), gy_neg = g(y-), fx_neg = f(x-). Roles an
/// objective does not use carry zero gradients.
template <typename Scalar>
struct CrossViewLoss {
  Scalar value = 0;
  Vector<Scalar> d_fx_pos;
  Vector<Scalar> d_gy_pos;
  Vector<Scalar> d_gy_neg;
  Vector<Scalar> d_fx_neg;
};

namespace detail {

// Hinge over d(p1, p2) - d(n1, n2). Gradients are zero unless the hinge
// argument is strictly positive (the boundary takes the inactive branch).
template <typename Scalar>
struct HingeTerms {
  Scalar value;
  CosineGradient<Scalar> pos;
  CosineGradient<Scalar> neg;
  bool active;
};

template <typename Scalar>
HingeTerms<Scalar> hinge(const Vector<Scalar>& p1, const Vector<Scalar>& p2,
                         const Vector<Scalar>& n1, const Vector<Scalar>& n2,
                         const Margin& m) {
  HingeTerms<Scalar> out{0, cosine_distance_gradient(p1, p2),
                         cosine_distance_gradient(n1, n2), false};
  const Scalar arg = Scalar(m.value()) + (out.pos.distance - out.neg.distance);
  out.active = arg > Scalar(0);
  out.value = out.active ? arg : Scalar(0);
  return out;
}

}  // namespace detail

template <typename Scalar>
TripletLoss<Scalar> triplet_loss(const Vector<Scalar>& anchor,
                                 const Vector<Scalar>& positive,
                                 const Vector<Scalar>& negative,
                                 const Margin& m) {
  const auto h = detail::hinge(anchor, positive, anchor, negative, m);
  TripletLoss<Scalar> out;
  out.value = h.value;
  out.d_anchor = Vector<Scalar>::Zero(anchor.size());
  out.d_positive = Vector<Scalar>::Zero(positive.size());
  out.d_negative = Vector<Scalar>::Zero(negative.size());
  if (h.active) {
    out.d_anchor = h.pos.d_a - h.neg.d_a;
    out.d_positive = h.pos.d_b;
    out.d_negative = -h.neg.d_b;
  }
  return out;
}

template <typename Scalar>
CrossViewLoss<Scalar> zero_cross_view(Eigen::Index dims) {
  CrossViewLoss<Scalar> out;
  out.d_fx_pos = Vector<Scalar>::Zero(dims);
  out.d_gy_pos = Vector<Scalar>::Zero(dims);
  out.d_gy_neg = Vector<Scalar>::Zero(dims);
  out.d_fx_neg = Vector<Scalar>::Zero(dims);
  return out;
}

/// max(0, m + d(f(x+), g(y+)) - d(f(x+), g(y-)))
template <typename Scalar>
CrossViewLoss<Scalar> obj0_loss(const Vector<Scalar>& fx_pos,
                                const Vector<Scalar>& gy_pos,
                                const Vector<Scalar>& gy_neg, const Margin& m) {
  const auto h = detail::hinge(fx_pos, gy_pos, fx_pos, gy_neg, m);
  auto out = zero_cross_view<Scalar>(fx_pos.size());
  out.value = h.value;
  if (h.active) {
    out.d_fx_pos = h.pos.d_a - h.neg.d_a;
    out.d_gy_pos = h.pos.d_b;
    out.d_gy_neg = -h.neg.d_b;
  }
  return out;
}

/// max(0, m + d(f(x+), g(y+)) - d(f(x-), g(y+)))
template <typename Scalar>
CrossViewLoss<Scalar> obj1_loss(const Vector<Scalar>& fx_pos,
                                const Vector<Scalar>& gy_pos,
                                const Vector<Scalar>& fx_neg, const Margin& m) {
  const auto h = detail::hinge(fx_pos, gy_pos, fx_neg, gy_pos, m);
  auto out = zero_cross_view<Scalar>(fx_pos.size());
  out.value = h.value;
  if (h.active) {
    out.d_fx_pos = h.pos.d_a;
    out.d_gy_pos = h.pos.d_b - h.neg.d_b;
    out.d_fx_neg = -h.neg.d_a;
  }
  return out;
}

/// obj0 + obj1, value and per-role gradients summed.
template <typename Scalar>
CrossViewLoss<Scalar> combined_loss(const Vector<Scalar>& fx_pos,
                                    const Vector<Scalar>& gy_pos,
                                    const Vector<Scalar>& gy_neg,
                                    const Vector<Scalar>& fx_neg,
                                    const Margin& m) {
  const auto a = obj0_loss(fx_pos, gy_pos, gy_neg, m);
  const auto b = obj1_loss(fx_pos, gy_pos, fx_neg, m);
  CrossViewLoss<Scalar> out;
  out.value = a.value + b.value;
  out.d_fx_pos = a.d_fx_pos + b.d_fx_pos;
  out.d_gy_pos = a.d_gy_pos + b.d_gy_pos;
  out.d_gy_neg = a.d_gy_neg + b.d_gy_neg;
  out.d_fx_neg = a.d_fx_neg + b.d_fx_neg;
  return out;
}

enum class Objective { kObj0, kObj1, kBoth };

Objective parse_objective(const std::string& text);
const char* to_string(Objective objective);

}  // namespace phonemv::losses
