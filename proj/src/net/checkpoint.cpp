#include "phonemv/net/checkpoint.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

namespace phonemv::net {

std::string encode_checkpoint(const NetParams& params) {
  util::ByteWriter w;
  w.put_bytes(kCheckpointMagic);
  w.put_u32(kCheckpointVersion);
  const std::string config = to_json(params.config);
  w.put_u32(static_cast<std::uint32_t>(config.size()));
  w.put_bytes(config);
  for (const auto& t : tensors(params)) {
    w.put_u32(static_cast<std::uint32_t>(t.values.rows()));
    w.put_u32(static_cast<std::uint32_t>(t.values.cols()));
    for (Eigen::Index r = 0; r < t.values.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.values.cols(); ++c) w.put_f64(t.values(r, c));
    }
  }
  return w.bytes();
}

NetParams decode_checkpoint(std::string_view bytes, const std::string& origin) {
  util::ByteReader r(bytes);
  if (r.get_bytes(4) != kCheckpointMagic) {
    throw FormatError(origin + ": bad magic, expected PHNM");
  }
  const auto version = r.get_u32();
  if (r.exhausted()) throw TruncatedError(origin + ": header truncated");
  if (version != kCheckpointVersion) {
    throw FormatError(origin + ": unsupported checkpoint version " +
                      std::to_string(version));
  }
  const auto config_len = r.get_u32();
  const auto config_text = r.get_bytes(config_len);
  if (r.exhausted()) throw TruncatedError(origin + ": config truncated");
  NetParams params = NetParams::zeros(net_config_from_json(std::string(config_text)));
  for (auto& t : tensors(params)) {
    const auto rows = r.get_u32();
    const auto cols = r.get_u32();
    if (r.exhausted()) throw TruncatedError(origin + ": tensor header truncated");
    if (rows != t.values.rows() || cols != t.values.cols()) {
      throw FormatError(origin + ": tensor " + t.name + " has shape " +
                        std::to_string(rows) + "x" + std::to_string(cols) +
                        ", config implies " + std::to_string(t.values.rows()) +
                        "x" + std::to_string(t.values.cols()));
    }
    if (r.remaining() < static_cast<std::size_t>(rows) * cols * 8) {
      throw TruncatedError(origin + ": tensor " + t.name + " truncated");
    }
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.values.cols(); ++j) t.values(i, j) = r.get_f64();
    }
    if (!t.values.allFinite()) {
      throw ValidationError(origin + ": tensor " + t.name + " has non-finite values");
    }
  }
  if (r.remaining() != 0) {
    throw FormatError(origin + ": trailing bytes after last tensor");
  }
  return params;
}

void save_checkpoint(const std::string& path, const NetParams& params) {
  util::write_file_atomic(path, encode_checkpoint(params));
}

NetParams load_checkpoint(const std::string& path) {
  return decode_checkpoint(util::read_file(path), path);
}

}  // namespace phonemv::net
