#include "seqtag/label_scheme.h"

#include <string>

#include "seqtag/error.h"

namespace seqtag {

LabelScheme::LabelScheme(std::vector<std::string> entity_types)
    : entity_types_(std::move(entity_types)) {
  tags_.reserve(1 + 2 * entity_types_.size());
  tags_.push_back("O");
  for (const auto& type : entity_types_) {
    if (type.empty()) throw Error(ErrorCode::kInvalidConfig, "empty entity type name");
    tags_.push_back("B-" + type);
    tags_.push_back("I-" + type);
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (!tag_to_index_.emplace(tags_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate tag " + tags_[i]);
    }
  }
}

LabelScheme LabelScheme::wetlab() {
  return LabelScheme({"Method", "Modifier", "Reagent", "Action", "Amount", "Device",
                      "Time", "Speed", "Mention", "Location", "Numerical", "Temperature",
                      "Size", "Concentration", "Measure-Type", "Generic-Measure", "Seal",
                      "pH"});
}

std::optional<int> LabelScheme::tag_index(std::string_view tag) const {
  auto it = tag_to_index_.find(std::string(tag));
  if (it == tag_to_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LabelScheme::type_index(std::string_view type_name) const {
  for (std::size_t i = 0; i < entity_types_.size(); ++i) {
    if (entity_types_[i] == type_name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int LabelScheme::require_tag(std::string_view tag) const {
  auto index = tag_index(tag);
  if (!index) throw Error(ErrorCode::kUnknownTag, std::string(tag));
  return *index;
}

std::unordered_map<std::string, std::string> wetlab_display_aliases() {
  return {{"Generic-Measure", "Measure"}, {"Measure-Type", "Type"}};
}

}  // namespace seqtag
