#include "phonemv/gop/lattice_io.hpp"

#include "phonemv/corpus/feature_file.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

#include <sstream>

namespace phonemv::gop {

using nlohmann::json;

std::vector<PhoneId> parse_state_map(const std::string& json_text) {
  try {
    return json::parse(json_text).at("states").get<std::vector<PhoneId>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed state map: ") + e.what());
  }
}

std::string encode_state_map(const std::vector<PhoneId>& state_phone) {
  json j;
  j["states"] = state_phone;
  return j.dump() + "\n";
}

PosteriorLattice read_lattice(const std::string& posteriors_path,
                              const std::string& states_path) {
  PosteriorLattice lattice;
  lattice.posteriors = corpus::read_feature_matrix(posteriors_path);
  lattice.state_phone = parse_state_map(util::read_file(states_path));
  lattice.validate();
  return lattice;
}

void write_lattice(const PosteriorLattice& lattice,
                   const std::string& posteriors_path) {
  corpus::write_feature_matrix(posteriors_path, lattice.posteriors);
}

std::vector<GopItem> parse_gop_items(const std::string& text) {
  std::vector<GopItem> items;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      GopItem item;
      item.id = j.at("id").get<std::string>();
      item.canonical = j.at("canonical").get<std::string>();
      if (j.contains("spoken")) item.spoken = j.at("spoken").get<std::string>();
      item.lattice = j.at("lattice").get<std::string>();
      item.states = j.at("states").get<std::string>();
      item.start = j.at("start").get<Eigen::Index>();
      item.end = j.at("end").get<Eigen::Index>();
      items.push_back(std::move(item));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return items;
}

std::vector<GopItem> load_gop_items(const std::string& path) {
  auto items = parse_gop_items(util::read_file(path));
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](std::string& p) {
    if (std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  for (auto& item : items) {
    resolve(item.lattice);
    resolve(item.states);
  }
  return items;
}

std::string serialize_gop_items(const std::vector<GopItem>& items) {
  std::string out;
  for (const auto& item : items) {
    json j;
    j["id"] = item.id;
    j["canonical"] = item.canonical;
    if (item.spoken) j["spoken"] = *item.spoken;
    j["lattice"] = item.lattice;
    j["states"] = item.states;
    j["start"] = item.start;
    j["end"] = item.end;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace phonemv::gop
