#ifndef SEQTAG_LABEL_SCHEME_H_
#define SEQTAG_LABEL_SCHEME_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seqtag {

// BIO tag inventory over an ordered list of entity types.
// Index 0 is "O"; type k maps to B = 1 + 2k and I = 2 + 2k.
class LabelScheme {
 public:
  explicit LabelScheme(std::vector<std::string> entity_types);

  // The 18 wet-lab protocol entity types, in their canonical order.
  static LabelScheme wetlab();

  const std::vector<std::string>& entity_types() const { return entity_types_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t num_tags() const { return tags_.size(); }
  std::size_t num_types() const { return entity_types_.size(); }

  std::optional<int> tag_index(std::string_view tag) const;
  std::optional<int> type_index(std::string_view type_name) const;
  const std::string& tag(int index) const { return tags_.at(index); }

  // Throws Error(kUnknownTag) when the tag is not in the scheme.
  int require_tag(std::string_view tag) const;

  static int begin_tag(int type) { return 1 + 2 * type; }
  static int inside_tag(int type) { return 2 + 2 * type; }
  static bool is_begin(int tag) { return tag > 0 && tag % 2 == 1; }
  static bool is_inside(int tag) { return tag > 0 && tag % 2 == 0; }
  // -1 for "O".
  static int type_of(int tag) { return tag == 0 ? -1 : (tag - 1) / 2; }

  bool operator==(const LabelScheme& other) const {
    return entity_types_ == other.entity_types_;
  }

 private:
  std::vector<std::string> entity_types_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> tag_to_index_;
};

// Short display names for report rows.
// Generic-Measure is shown as "Measure" and Measure-Type as "Type".
std::unordered_map<std::string, std::string> wetlab_display_aliases();

}  // namespace seqtag

#endif  // SEQTAG_LABEL_SCHEME_H_
