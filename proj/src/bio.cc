#include "seqtag/bio.h"

#include <algorithm>
#include <optional>
#include <string_view>

#include "seqtag/error.h"
#include "seqtag/label_scheme.h"

namespace seqtag {
namespace {

struct ParsedTag {
  char prefix;  // 'O', 'B' or 'I'
  std::string_view type;
};

ParsedTag parse_tag(std::string_view tag) {
  if (tag == "O") return {'O', {}};
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return {tag[0], tag.substr(2)};
  }
  throw Error(ErrorCode::kUnknownTag, std::string(tag));
}

}  // namespace

std::vector<BioViolation> validate_bio(std::span<const std::string> tags) {
  std::vector<BioViolation> violations;
  std::optional<std::string_view> open;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    ParsedTag parsed = parse_tag(tags[i]);
    if (parsed.prefix == 'I' && (!open || *open != parsed.type)) {
      violations.push_back({i, i == 0 ? std::string("<BOS>") : tags[i - 1], tags[i]});
    }
    open = parsed.prefix == 'O' ? std::nullopt : std::optional(parsed.type);
  }
  return violations;
}

std::vector<Entity> tags_to_spans(std::span<const std::string> tags, BioMode mode,
                                  std::size_t sent_index) {
  std::vector<Entity> entities;
  std::optional<std::string_view> open_type;
  std::size_t open_start = 0;
  auto close = [&](std::size_t end) {
    if (open_type) entities.push_back({std::string(*open_type), sent_index, open_start, end, {}});
    open_type.reset();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    ParsedTag parsed = parse_tag(tags[i]);
    if (parsed.prefix == 'O') {
      close(i);
    } else if (parsed.prefix == 'B') {
      close(i);
      open_type = parsed.type;
      open_start = i;
    } else if (!open_type || *open_type != parsed.type) {
      if (mode == BioMode::kStrict) {
        throw Error(ErrorCode::kInvalidBio, "position " + std::to_string(i) + ": " +
                                                (i == 0 ? "<BOS>" : tags[i - 1]) + " " + tags[i]);
      }
      close(i);
      open_type = parsed.type;
      open_start = i;
    }
  }
  close(tags.size());
  return entities;
}

std::vector<std::string> spans_to_tags(std::span<const Entity> entities, std::size_t length) {
  std::vector<std::string> tags(length, "O");
  std::vector<bool> used(length, false);
  for (const auto& e : entities) {
    if (e.start >= e.end || e.end > length) {
      throw Error(ErrorCode::kOutOfBounds, e.type_name + " [" + std::to_string(e.start) + ", " +
                                               std::to_string(e.end) + ") in length " +
                                               std::to_string(length));
    }
    for (std::size_t i = e.start; i < e.end; ++i) {
      if (used[i]) {
        throw Error(ErrorCode::kOverlappingEntities, "position " + std::to_string(i));
      }
      used[i] = true;
      tags[i] = (i == e.start ? "B-" : "I-") + e.type_name;
    }
  }
  return tags;
}

std::vector<Entity> sentence_entities(const Sentence& sentence, TagField field,
                                      std::size_t sent_index, BioMode mode) {
  auto tags = sentence_tags(sentence, field);
  auto entities = tags_to_spans(tags, mode, sent_index);
  for (auto& e : entities) e.surface = join_surfaces(sentence, e.start, e.end);
  return entities;
}

std::size_t repair_bio(std::vector<int>& tags) {
  std::size_t changed = 0;
  int open_type = -1;
  for (int& tag : tags) {
    const int type = LabelScheme::type_of(tag);
    if (LabelScheme::is_inside(tag) && type != open_type) {
      tag = LabelScheme::begin_tag(type);
      ++changed;
    }
    open_type = type;
  }
  return changed;
}

}  // namespace seqtag
