#pragma once

#include "phonemv/errors.hpp"
#include "phonemv/types.hpp"

#include <algorithm>
#include <cmath>

namespace phonemv {

/// 1 - <a, b> / (|a| |b|), clamped to [0, 2]. Zero-norm inputs throw.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_distance(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) {
    throw ValidationError("cosine_distance: size mismatch");
  }
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (!(na > Scalar(0)) || !(nb > Scalar(0))) {
    throw ValidationError("cosine_distance: zero-norm embedding");
  }
  const Scalar d = Scalar(1) - a.dot(b) / (na * nb);
  return std::clamp(d, Scalar(0), Scalar(2));
}

/// Gradients of the (unclamped) cosine distance.
template <typename Scalar>
struct CosineGradient {
  Scalar distance;
  Vector<Scalar> d_a;
  Vector<Scalar> d_b;
};

template <typename DerivedA, typename DerivedB>
CosineGradient<typename DerivedA::Scalar> cosine_distance_gradient(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  CosineGradient<Scalar> out;
  out.distance = cosine_distance(a, b);
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  const Scalar cos = a.dot(b) / (na * nb);
  // d cos / da = b / (|a||b|) - cos * a / |a|^2
  out.d_a = -(b / (na * nb) - cos * a / (na * na));
  out.d_b = -(a / (na * nb) - cos * b / (nb * nb));
  return out;
}

}  // namespace phonemv
