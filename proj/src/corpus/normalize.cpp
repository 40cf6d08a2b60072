#include "phonemv/corpus/normalize.hpp"

#include "phonemv/errors.hpp"

#include <cmath>

namespace phonemv::corpus {

CmvnStats fit_cmvn(std::span<const FeatureMatrix> matrices) {
  Eigen::Index dims = -1;
  std::uint64_t count = 0;
  for (const auto& m : matrices) {
    if (dims < 0) dims = m.cols();
    if (m.cols() != dims) {
      throw ValidationError("fit_cmvn: inconsistent dims " +
                            std::to_string(m.cols()) + " vs " +
                            std::to_string(dims));
    }
    count += static_cast<std::uint64_t>(m.rows());
  }
  if (count == 0) throw ValidationError("fit_cmvn: no frames to accumulate");

  // Two passes for a stable variance.
  VectorXd sum = VectorXd::Zero(dims);
  for (const auto& m : matrices) sum += m.colwise().sum().transpose();
  CmvnStats stats;
  stats.count = count;
  stats.mean = sum / static_cast<double>(count);

  VectorXd sq = VectorXd::Zero(dims);
  for (const auto& m : matrices) {
    sq += (m.rowwise() - stats.mean.transpose())
              .array()
              .square()
              .colwise()
              .sum()
              .matrix()
              .transpose();
  }
  stats.stddev = (sq / static_cast<double>(count)).array().sqrt().max(kStddevFloor);
  return stats;
}

namespace {

void check_dims(const FeatureMatrix& matrix, const CmvnStats& stats) {
  if (matrix.cols() != stats.mean.size() ||
      stats.mean.size() != stats.stddev.size()) {
    throw ValidationError("cmvn: matrix has " + std::to_string(matrix.cols()) +
                          " dims, stats have " +
                          std::to_string(stats.mean.size()));
  }
}

}  // namespace

FeatureMatrix apply_cmvn(const FeatureMatrix& matrix, const CmvnStats& stats) {
  check_dims(matrix, stats);
  FeatureMatrix out = matrix.rowwise() - stats.mean.transpose();
  out.array().rowwise() /= stats.stddev.transpose().array();
  return out;
}

FeatureMatrix invert_cmvn(const FeatureMatrix& matrix, const CmvnStats& stats) {
  check_dims(matrix, stats);
  FeatureMatrix out = matrix;
  out.array().rowwise() *= stats.stddev.transpose().array();
  out.rowwise() += stats.mean.transpose();
  return out;
}

FeatureMatrix pad_or_truncate(const FeatureMatrix& matrix, int target_frames) {
  if (matrix.rows() < 1) {
    throw ValidationError("pad_or_truncate: input has no frames");
  }
  if (target_frames < 1) {
    throw ValidationError("pad_or_truncate: target_frames must be >= 1");
  }
  const Eigen::Index target = target_frames;
  if (matrix.rows() == target) return matrix;
  if (matrix.rows() > target) {
    const Eigen::Index head = (matrix.rows() - target) / 2;
    return matrix.middleRows(head, target);
  }
  FeatureMatrix out = FeatureMatrix::Zero(target, matrix.cols());
  out.topRows(matrix.rows()) = matrix;
  return out;
}

}  // namespace phonemv::corpus
