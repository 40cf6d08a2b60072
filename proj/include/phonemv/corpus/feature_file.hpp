#pragma once

#include "phonemv/types.hpp"

#include <string>
#include <string_view>

namespace phonemv::corpus {

// Binary layout, all little-endian:
//   "PHNF" | u32 version (=1) | u32 frames | u32 dims | frames*dims float32
// Values are row-major (frame by frame).
inline constexpr std::string_view kFeatureMagic = "PHNF";
inline constexpr std::uint32_t kFeatureVersion = 1;

/// Throws ValidationError unless frames >= 1, dims >= 1 and all values are
/// finite.
void validate_feature_matrix(const FeatureMatrix& m, const std::string& what);

std::string encode_feature_matrix(const FeatureMatrix& m);

/// Throws FormatError (magic/version), TruncatedError (short payload) or
/// ValidationError (non-finite values, empty shape). `origin` names the
/// source in error messages.
FeatureMatrix decode_feature_matrix(std::string_view bytes,
                                    const std::string& origin = "<memory>");

FeatureMatrix read_feature_matrix(const std::string& path);
void write_feature_matrix(const std::string& path, const FeatureMatrix& m);

/// Comma-separated text import: one frame per line, same number of columns
/// on every line. Blank lines and lines starting with '#' are skipped.
FeatureMatrix read_feature_csv(const std::string& path);

}  // namespace phonemv::corpus
