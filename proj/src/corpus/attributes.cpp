#include "phonemv/corpus/attributes.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace phonemv::corpus {

using nlohmann::json;

AttributeInventory::AttributeInventory(
    std::vector<std::string> attributes,
    std::map<PhoneId, std::vector<std::string>> phones,
    std::map<PhoneId, std::vector<PhoneId>> splits)
    : attributes_(std::move(attributes)),
      phone_attrs_(std::move(phones)),
      split_map_(std::move(splits)) {
  if (attributes_.size() != kNumAttributes) {
    throw ValidationError("inventory must define exactly 31 attributes, got " +
                          std::to_string(attributes_.size()));
  }
  std::map<std::string, int> column;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (!column.emplace(attributes_[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate attribute '" + attributes_[i] + "'");
    }
  }
  for (const auto& [phone, names] : phone_attrs_) {
    VectorXd v = VectorXd::Zero(kNumAttributes);
    for (const auto& name : names) {
      auto it = column.find(name);
      if (it == column.end()) {
        throw ValidationError("phone '" + phone + "' uses unknown attribute '" +
                              name + "'");
      }
      v(it->second) = 1.0;
    }
    if (v.sum() < 1.0) {
      throw ValidationError("phone '" + phone + "' sets no attribute");
    }
    phone_map_.emplace(phone, std::move(v));
  }
  for (const auto& [compound, parts] : split_map_) {
    if (parts.size() < 2 || parts.size() > kMaxPatternRows) {
      throw ValidationError("split of '" + compound +
                            "' must have 2 or 3 components");
    }
    if (phone_map_.count(compound)) {
      throw ValidationError("'" + compound +
                            "' is both a simple phone and a compound");
    }
    for (const auto& p : parts) {
      if (!phone_map_.count(p)) {
        throw ValidationError("split of '" + compound +
                              "' targets unknown phone '" + p + "'");
      }
    }
  }
}

bool AttributeInventory::contains(const PhoneId& phone) const {
  return phone_map_.count(phone) > 0 || split_map_.count(phone) > 0;
}

std::vector<PhoneId> AttributeInventory::all_phones() const {
  std::vector<PhoneId> out;
  for (const auto& [p, _] : phone_map_) out.push_back(p);
  for (const auto& [p, _] : split_map_) out.push_back(p);
  return out;
}

const VectorXd& AttributeInventory::vector_of(const PhoneId& phone) const {
  auto it = phone_map_.find(phone);
  if (it == phone_map_.end()) {
    throw ValidationError("unknown phone '" + phone + "'");
  }
  return it->second;
}

std::string AttributeInventory::to_json() const {
  json j;
  j["attributes"] = attributes_;
  j["phones"] = phone_attrs_;
  j["splits"] = split_map_;
  return j.dump(2) + "\n";
}

AttributeInventory parse_inventory(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
    return AttributeInventory(
        j.at("attributes").get<std::vector<std::string>>(),
        j.at("phones").get<std::map<PhoneId, std::vector<std::string>>>(),
        j.value("splits", std::map<PhoneId, std::vector<PhoneId>>{}));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed attribute inventory: ") +
                          e.what());
  }
}

AttributeInventory load_inventory(const std::string& path) {
  return parse_inventory(util::read_file(path));
}

const AttributeInventory& default_inventory() {
  static const AttributeInventory inventory =
      parse_inventory(default_inventory_json());
  return inventory;
}

FeatureMatrix encode_attribute_pattern(const PhoneId& phone,
                                       const AttributeInventory& inventory) {
  FeatureMatrix pattern = FeatureMatrix::Zero(kMaxPatternRows, kNumAttributes);
  if (auto it = inventory.split_map().find(phone);
      it != inventory.split_map().end()) {
    for (std::size_t row = 0; row < it->second.size(); ++row) {
      pattern.row(static_cast<Eigen::Index>(row)) =
          inventory.vector_of(it->second[row]).transpose();
    }
    return pattern;
  }
  if (!inventory.phone_map().count(phone)) {
    throw ValidationError("encode_attribute_pattern: unknown phone '" + phone +
                          "'");
  }
  pattern.row(0) = inventory.vector_of(phone).transpose();
  return pattern;
}

}  // namespace phonemv::corpus
