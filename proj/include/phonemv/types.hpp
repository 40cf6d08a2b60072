#pragma once

#include <Eigen/Core>

#include <string>

namespace phonemv {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Frames are rows; transposing gives a column-per-frame view without a copy.
template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

/// A frames x dims feature matrix. Held in double precision in memory;
/// stored as float32 on disk.
using FeatureMatrix = RowMatrix<double>;

/// Output of an embedding network.
using Embedding = VectorXd;

using PhoneId = std::string;

enum class Split { kTrain, kDev, kTest };

/// Verification verdict for one phone occurrence.
enum class Decision { kAccept, kReject };

inline const char* to_string(Decision d) {
  return d == Decision::kAccept ? "accept" : "reject";
}

std::string to_string(Split split);
Split parse_split(const std::string& text);

}  // namespace phonemv
