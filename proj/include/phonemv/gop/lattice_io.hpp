#pragma once

#include "phonemv/gop/gop.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonemv::gop {

/// Posteriors use the PHNF feature layout; the sidecar JSON carries
/// {"states": [central phone id per column]}.
PosteriorLattice read_lattice(const std::string& posteriors_path,
                              const std::string& states_path);
void write_lattice(const PosteriorLattice& lattice,
                   const std::string& posteriors_path);
std::string encode_state_map(const std::vector<PhoneId>& state_phone);
std::vector<PhoneId> parse_state_map(const std::string& json_text);

/// One line of a GOP input file (lattices.jsonl):
/// {"id", "canonical", "spoken"?, "lattice", "states", "start", "end"};
/// paths relative to the file's directory.
struct GopItem {
  std::string id;
  PhoneId canonical;
  std::optional<PhoneId> spoken;
  std::string lattice;
  std::string states;
  Eigen::Index start = 0;
  Eigen::Index end = 0;
};

std::vector<GopItem> parse_gop_items(const std::string& text);
std::vector<GopItem> load_gop_items(const std::string& path);
std::string serialize_gop_items(const std::vector<GopItem>& items);

}  // namespace phonemv::gop
