#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phonemv::util {

/// Append-only little-endian byte sink.
class ByteWriter {
 public:
  void put_bytes(std::string_view bytes) {
    buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  }
  void put_u32(std::uint32_t value) { put_le(value); }
  void put_f32(float value) { put_le(std::bit_cast<std::uint32_t>(value)); }
  void put_f64(double value) { put_le(std::bit_cast<std::uint64_t>(value)); }

  const std::string& bytes() const { return buffer_; }

 private:
  template <typename U>
  void put_le(U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buffer_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
  }

  std::string buffer_;
};

/// Bounds-checked little-endian reader. Reading past the end sets
/// exhausted() and yields zeros; callers check remaining() up front.
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

  std::string_view get_bytes(std::size_t n) {
    if (n > remaining()) {
      pos_ = bytes_.size();
      exhausted_ = true;
      return {};
    }
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t get_u32() { return get_le<std::uint32_t>(); }
  float get_f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
  double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

  bool exhausted() const { return exhausted_; }

 private:
  template <typename U>
  U get_le() {
    auto raw = get_bytes(sizeof(U));
    if (raw.size() != sizeof(U)) return 0;
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      value |= static_cast<U>(static_cast<unsigned char>(raw[i])) << (8 * i);
    }
    return value;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
  bool exhausted_ = false;
};

std::string read_file(const std::string& path);

/// Writes to a sibling temp file and renames it into place, so readers never
/// observe a partially written file.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace phonemv::util
