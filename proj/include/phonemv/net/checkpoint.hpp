#pragma once

#include "phonemv/net/params.hpp"

#include <string>
#include <string_view>

namespace phonemv::net {

// Binary layout, all little-endian:
//   "PHNM" | u32 version (=1) | u32 config length | config JSON bytes
//   then per tensor in declaration order: u32 rows | u32 cols |
//   rows*cols float64, row-major
inline constexpr std::string_view kCheckpointMagic = "PHNM";
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const NetParams& params);
NetParams decode_checkpoint(std::string_view bytes,
                            const std::string& origin = "<memory>");

void save_checkpoint(const std::string& path, const NetParams& params);
NetParams load_checkpoint(const std::string& path);

}  // namespace phonemv::net
