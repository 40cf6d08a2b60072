#include "phonemv/corpus/feature_file.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace phonemv::corpus {

void validate_feature_matrix(const FeatureMatrix& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ValidationError(what + ": feature matrix must have at least one "
                                 "frame and one dimension");
  }
  if (!m.allFinite()) {
    throw ValidationError(what + ": feature matrix contains non-finite values");
  }
}

std::string encode_feature_matrix(const FeatureMatrix& m) {
  validate_feature_matrix(m, "encode");
  util::ByteWriter w;
  w.put_bytes(kFeatureMagic);
  w.put_u32(kFeatureVersion);
  w.put_u32(static_cast<std::uint32_t>(m.rows()));
  w.put_u32(static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    for (Eigen::Index d = 0; d < m.cols(); ++d) {
      w.put_f32(static_cast<float>(m(t, d)));
    }
  }
  return w.bytes();
}

FeatureMatrix decode_feature_matrix(std::string_view bytes,
                                    const std::string& origin) {
  util::ByteReader r(bytes);
  const auto head = bytes.substr(0, 4);
  if (head != kFeatureMagic.substr(0, head.size())) {
    throw FormatError(origin + ": bad magic, expected PHNF");
  }
  if (r.remaining() < 16) throw TruncatedError(origin + ": header truncated");
  if (r.get_bytes(4) != kFeatureMagic) {
    throw FormatError(origin + ": bad magic, expected PHNF");
  }
  const auto version = r.get_u32();
  if (version != kFeatureVersion) {
    throw FormatError(origin + ": unsupported feature format version " +
                      std::to_string(version));
  }
  const std::uint64_t frames = r.get_u32();
  const std::uint64_t dims = r.get_u32();
  if (frames == 0 || dims == 0) {
    throw ValidationError(origin + ": zero frames or dims in header");
  }
  const std::uint64_t expected = frames * dims * 4;
  if (r.remaining() < expected) {
    throw TruncatedError(origin + ": header claims " +
                         std::to_string(frames * dims) + " floats but only " +
                         std::to_string(r.remaining() / 4) + " present");
  }
  if (r.remaining() > expected) {
    throw FormatError(origin + ": " + std::to_string(r.remaining() - expected) +
                      " trailing bytes after payload");
  }
  FeatureMatrix m(static_cast<Eigen::Index>(frames),
                  static_cast<Eigen::Index>(dims));
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    for (Eigen::Index d = 0; d < m.cols(); ++d) {
      m(t, d) = static_cast<double>(r.get_f32());
    }
  }
  if (!m.allFinite()) {
    throw ValidationError(origin + ": payload contains non-finite values");
  }
  return m;
}

FeatureMatrix read_feature_matrix(const std::string& path) {
  return decode_feature_matrix(util::read_file(path), path);
}

void write_feature_matrix(const std::string& path, const FeatureMatrix& m) {
  util::write_file_atomic(path, encode_feature_matrix(m));
}

FeatureMatrix read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("not a number: '" + cell + "'", line_no);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("expected " + std::to_string(rows.front().size()) +
                           " columns, found " + std::to_string(row.size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no frames");
  FeatureMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t d = 0; d < rows[t].size(); ++d) {
      m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) = rows[t][d];
    }
  }
  validate_feature_matrix(m, path);
  return m;
}

}  // namespace phonemv::corpus
