#pragma once

#include "phonemv/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace phonemv::corpus {

inline constexpr int kNumAttributes = 31;
inline constexpr int kMaxPatternRows = 3;

/// Speech-attribute definitions: 31 named binary attributes, a binary vector
/// per simple phone, and the monophthong split of each compound vowel.
class AttributeInventory {
 public:
  /// Validates: exactly 31 distinct attributes; every phone sets at least one
  /// attribute; splits have 2-3 components that are all simple phones.
  AttributeInventory(std::vector<std::string> attributes,
                     std::map<PhoneId, std::vector<std::string>> phones,
                     std::map<PhoneId, std::vector<PhoneId>> splits);

  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::map<PhoneId, VectorXd>& phone_map() const { return phone_map_; }
  const std::map<PhoneId, std::vector<PhoneId>>& split_map() const {
    return split_map_;
  }

  bool contains(const PhoneId& phone) const;
  /// Simple phones followed by compound vowels, each group sorted.
  std::vector<PhoneId> all_phones() const;

  /// Binary row vector of a simple phone. Throws ValidationError if absent.
  const VectorXd& vector_of(const PhoneId& phone) const;

  /// Canonical JSON (the same schema the parser accepts).
  std::string to_json() const;

 private:
  std::vector<std::string> attributes_;
  std::map<PhoneId, std::vector<std::string>> phone_attrs_;
  std::map<PhoneId, VectorXd> phone_map_;
  std::map<PhoneId, std::vector<PhoneId>> split_map_;
};

/// {"attributes": [...31 names], "phones": {phone: [names]},
///  "splits": {compound: [components]}}
AttributeInventory parse_inventory(const std::string& json_text);
AttributeInventory load_inventory(const std::string& path);

/// The Mandarin inventory shipped in data/mandarin_attributes.json.
const AttributeInventory& default_inventory();
const std::string& default_inventory_json();

/// 3 x 31 binary pattern. Compound vowels fill one row per component in
/// order; simple phones fill row 0; unused rows are zero. Throws
/// ValidationError naming an unknown phone.
FeatureMatrix encode_attribute_pattern(const PhoneId& phone,
                                       const AttributeInventory& inventory);

}  // namespace phonemv::corpus
