#pragma once

#include "phonemv/types.hpp"

#include <cstdint>
#include <span>

namespace phonemv::corpus {

/// Floor applied to per-dimension standard deviations of constant dims.
inline constexpr double kStddevFloor = 1e-8;

/// Global cepstral mean/variance statistics (population stddev).
struct CmvnStats {
  VectorXd mean;
  VectorXd stddev;
  std::uint64_t count = 0;
};

/// Accumulates over every frame of every matrix; matrices must agree on dims.
CmvnStats fit_cmvn(std::span<const FeatureMatrix> matrices);

FeatureMatrix apply_cmvn(const FeatureMatrix& matrix, const CmvnStats& stats);
FeatureMatrix invert_cmvn(const FeatureMatrix& matrix, const CmvnStats& stats);

inline constexpr int kDefaultTargetFrames = 58;

/// Fixes the frame count: short inputs get zero rows appended, long inputs
/// keep the centered window (floor((frames - target) / 2) rows dropped from
/// the head).
FeatureMatrix pad_or_truncate(const FeatureMatrix& matrix,
                              int target_frames = kDefaultTargetFrames);

}  // namespace phonemv::corpus
