#pragma once

#include "phonemv/errors.hpp"
#include "phonemv/types.hpp"

#include <Eigen/Eigenvalues>

#include <span>
#include <string>

namespace phonemv::corpus {

/// Per-frame linear dimension reduction: out = (in - mean) * projection.
template <typename Scalar>
struct PcaModel {
  Vector<Scalar> mean;        // in_dims
  Matrix<Scalar> projection;  // in_dims x out_dims, orthonormal columns
  Vector<Scalar> variances;   // eigenvalue of each kept column, descending

  Eigen::Index in_dims() const { return projection.rows(); }
  Eigen::Index out_dims() const { return projection.cols(); }
};

/// Fits on every frame of `matrices` (population covariance). Columns are the
/// leading eigenvectors in eigenvalue-descending order, each signed so that
/// its largest-magnitude element is positive.
template <typename Scalar>
PcaModel<Scalar> fit_pca(std::span<const RowMatrix<Scalar>> matrices,
                         Eigen::Index out_dims) {
  Eigen::Index dims = -1;
  Eigen::Index frames = 0;
  for (const auto& m : matrices) {
    if (dims < 0) dims = m.cols();
    if (m.cols() != dims) {
      throw ValidationError("fit_pca: inconsistent input dims");
    }
    frames += m.rows();
  }
  if (out_dims < 1 || dims < 0 || out_dims > dims) {
    throw ValidationError("fit_pca: out_dims must be in [1, in_dims]");
  }
  if (frames <= out_dims) {
    throw ValidationError("fit_pca: need more than " + std::to_string(out_dims) +
                          " frames, got " + std::to_string(frames));
  }

  Vector<Scalar> mean = Vector<Scalar>::Zero(dims);
  for (const auto& m : matrices) mean += m.colwise().sum().transpose();
  mean /= static_cast<Scalar>(frames);

  Matrix<Scalar> cov = Matrix<Scalar>::Zero(dims, dims);
  for (const auto& m : matrices) {
    const Matrix<Scalar> centered = m.rowwise() - mean.transpose();
    cov.noalias() += centered.transpose() * centered;
  }
  cov /= static_cast<Scalar>(frames);

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("fit_pca: eigendecomposition failed");
  }

  PcaModel<Scalar> model;
  model.mean = std::move(mean);
  model.projection.resize(dims, out_dims);
  model.variances.resize(out_dims);
  // Eigen returns ascending eigenvalues.
  for (Eigen::Index k = 0; k < out_dims; ++k) {
    const Eigen::Index src = dims - 1 - k;
    auto column = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    column.cwiseAbs().maxCoeff(&arg);
    const Scalar sign = column(arg) < Scalar(0) ? Scalar(-1) : Scalar(1);
    model.projection.col(k) = sign * column;
    model.variances(k) = solver.eigenvalues()(src);
  }
  return model;
}

template <typename Scalar>
RowMatrix<Scalar> apply_pca(const RowMatrix<Scalar>& matrix,
                            const PcaModel<Scalar>& model) {
  if (matrix.cols() != model.in_dims()) {
    throw ValidationError("apply_pca: matrix has " +
                          std::to_string(matrix.cols()) + " dims, model expects " +
                          std::to_string(model.in_dims()));
  }
  return (matrix.rowwise() - model.mean.transpose()) * model.projection;
}

/// Maps reduced frames back to the input space.
template <typename Scalar>
RowMatrix<Scalar> reconstruct_pca(const RowMatrix<Scalar>& reduced,
                                  const PcaModel<Scalar>& model) {
  RowMatrix<Scalar> out = reduced * model.projection.transpose();
  out.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace phonemv::corpus
