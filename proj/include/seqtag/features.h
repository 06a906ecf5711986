#ifndef SEQTAG_FEATURES_H_
#define SEQTAG_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/label_scheme.h"

namespace seqtag {

// Bumped whenever the feature string grammar changes; stored in model files.
inline constexpr int kFeatureGrammarVersion = 1;

using FeatureId = std::uint32_t;

class FeatureIndex {
 public:
  // Returns the id of `feature`, allocating one if needed.
  // Throws Error(kInvalidConfig) once frozen.
  FeatureId add(std::string_view feature);
  std::optional<FeatureId> lookup(std::string_view feature) const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return strings_.size(); }
  const std::string& feature(FeatureId id) const { return strings_.at(id); }
  const std::vector<std::string>& features() const { return strings_; }

  bool operator==(const FeatureIndex& other) const {
    return strings_ == other.strings_ && frozen_ == other.frozen_;
  }

 private:
  std::unordered_map<std::string, FeatureId> ids_;
  std::vector<std::string> strings_;
  bool frozen_ = false;
};

// Case-folded entity surfaces per type. Phrases are lowercased tokens joined
// by single spaces.
class Gazetteer {
 public:
  void add(const std::string& type, std::string_view phrase);
  bool contains(const std::string& type, std::string_view phrase) const;
  void merge(const Gazetteer& other);

  const std::map<std::string, std::set<std::string>>& entries() const { return entries_; }
  std::size_t max_length(const std::string& type) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  bool operator==(const Gazetteer& other) const { return entries_ == other.entries_; }

 private:
  std::map<std::string, std::set<std::string>> entries_;
  std::map<std::string, std::size_t> max_length_;
};

struct FeatureConfig {
  int window = 2;
  int affix_length = 3;
  bool use_shape = true;
  bool use_gazetteer = true;

  void validate() const;
  bool operator==(const FeatureConfig&) const = default;
};

// Gold entities of `docs`, case-folded. Only ever call this on training data.
Gazetteer build_gazetteer(const std::vector<Document>& docs);

// Reads `Type<TAB>phrase` lines. Types must belong to the scheme.
Gazetteer read_gazetteer(std::string_view text, const LabelScheme& scheme);

// Word shape: upper -> X, lower -> x, digit -> d, other characters kept;
// runs of the same symbol compressed.
std::string word_shape(std::string_view word);

// Per-position lists of entity types whose phrases cover the position
// under greedy longest match, run separately for each type.
std::vector<std::vector<std::string>> gazetteer_matches(const Sentence& sentence,
                                                        const Gazetteer& gazetteer);

// Feature strings for one position. `matches` may be passed in to avoid
// recomputing gazetteer_matches for every position of a sentence.
std::vector<std::string> token_features(const Sentence& sentence, std::size_t position,
                                        const FeatureConfig& config, const Gazetteer& gazetteer);
std::vector<std::string> token_features(const Sentence& sentence, std::size_t position,
                                        const FeatureConfig& config,
                                        const std::vector<std::vector<std::string>>& matches);

// Feature strings seen over the training corpus, in first-seen order. Frozen.
FeatureIndex fit_index(const std::vector<Document>& docs, const FeatureConfig& config,
                       const Gazetteer& gazetteer);

using SentenceFeatures = std::vector<std::vector<FeatureId>>;

// Sorted unique known feature ids per position; unseen strings are dropped.
SentenceFeatures featurize(const Sentence& sentence, const FeatureIndex& index,
                           const FeatureConfig& config, const Gazetteer& gazetteer);

}  // namespace seqtag

#endif  // SEQTAG_FEATURES_H_
