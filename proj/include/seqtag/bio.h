#ifndef SEQTAG_BIO_H_
#define SEQTAG_BIO_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqtag/corpus.h"

namespace seqtag {

struct BioViolation {
  std::size_t position = 0;
  std::string previous;  // "<BOS>" at sentence start
  std::string tag;

  bool operator==(const BioViolation&) const = default;
};

enum class BioMode {
  kStrict,  // throw Error(kInvalidBio) on an I-X that continues nothing
  kRepair,  // treat such an I-X as B-X
};

// Lists every I-X that does not follow B-X or I-X. Never throws on
// well-formed tag strings.
std::vector<BioViolation> validate_bio(std::span<const std::string> tags);

// Entities sorted by start; sent_index is set on every entity.
// Surfaces are left empty; see sentence_entities for the joined text.
std::vector<Entity> tags_to_spans(std::span<const std::string> tags,
                                  BioMode mode = BioMode::kRepair,
                                  std::size_t sent_index = 0);

// Inverse of tags_to_spans. Throws kOverlappingEntities or kOutOfBounds.
std::vector<std::string> spans_to_tags(std::span<const Entity> entities, std::size_t length);

// Entities of one sentence with surfaces filled in.
std::vector<Entity> sentence_entities(const Sentence& sentence, TagField field,
                                      std::size_t sent_index, BioMode mode = BioMode::kRepair);

// Id-level repair used on decoder output: I-X that continues nothing becomes B-X.
// Returns the number of tags changed.
std::size_t repair_bio(std::vector<int>& tags);

}  // namespace seqtag

#endif  // SEQTAG_BIO_H_
