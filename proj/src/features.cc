#include "seqtag/features.h"

#include <algorithm>

#include "seqtag/bio.h"
#include "seqtag/error.h"
#include "seqtag/unicode.h"

namespace seqtag {

FeatureId FeatureIndex::add(std::string_view feature) {
  std::string key(feature);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  if (frozen_) throw Error(ErrorCode::kInvalidConfig, "feature index is frozen");
  const auto id = static_cast<FeatureId>(strings_.size());
  ids_.emplace(key, id);
  strings_.push_back(std::move(key));
  return id;
}

std::optional<FeatureId> FeatureIndex::lookup(std::string_view feature) const {
  auto it = ids_.find(std::string(feature));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Gazetteer::add(const std::string& type, std::string_view phrase) {
  std::string key = unicode::to_lower(phrase);
  const auto words = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
  auto& longest = max_length_[type];
  longest = std::max(longest, words);
  entries_[type].insert(std::move(key));
}

bool Gazetteer::contains(const std::string& type, std::string_view phrase) const {
  auto it = entries_.find(type);
  return it != entries_.end() && it->second.count(std::string(phrase)) > 0;
}

void Gazetteer::merge(const Gazetteer& other) {
  for (const auto& [type, phrases] : other.entries_) {
    for (const auto& phrase : phrases) add(type, phrase);
  }
}

std::size_t Gazetteer::max_length(const std::string& type) const {
  auto it = max_length_.find(type);
  return it == max_length_.end() ? 0 : it->second;
}

std::size_t Gazetteer::size() const {
  std::size_t n = 0;
  for (const auto& [type, phrases] : entries_) n += phrases.size();
  return n;
}

void FeatureConfig::validate() const {
  if (window < 0) throw Error(ErrorCode::kInvalidConfig, "context window must be >= 0");
  if (affix_length < 1) throw Error(ErrorCode::kInvalidConfig, "affix length must be >= 1");
}

Gazetteer build_gazetteer(const std::vector<Document>& docs) {
  Gazetteer gazetteer;
  for (const auto& doc : docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      for (const auto& entity : sentence_entities(doc.sentences[s], TagField::kGold, s)) {
        gazetteer.add(entity.type_name, entity.surface);
      }
    }
  }
  return gazetteer;
}

Gazetteer read_gazetteer(std::string_view text, const LabelScheme& scheme) {
  Gazetteer gazetteer;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  text = unicode::strip_bom(text);
  while (pos < text.size()) {
    auto next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    auto line = text.substr(pos, next - pos);
    pos = next + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab + 1 >= line.size()) {
      throw Error(ErrorCode::kMalformedLine,
                  "gazetteer line " + std::to_string(line_no) + ": expected Type<TAB>phrase");
    }
    std::string type(line.substr(0, tab));
    if (!scheme.type_index(type)) {
      throw Error(ErrorCode::kUnknownTag, "gazetteer type " + type);
    }
    gazetteer.add(type, line.substr(tab + 1));
  }
  return gazetteer;
}

std::string word_shape(std::string_view word) {
  std::u32string shape;
  for (char32_t cp : unicode::decode(word)) {
    char32_t symbol = cp;
    if (unicode::is_upper(cp)) {
      symbol = U'X';
    } else if (unicode::is_lower(cp)) {
      symbol = U'x';
    } else if (unicode::is_digit(cp)) {
      symbol = U'd';
    }
    if (shape.empty() || shape.back() != symbol) shape.push_back(symbol);
  }
  return unicode::encode(shape);
}

std::vector<std::vector<std::string>> gazetteer_matches(const Sentence& sentence,
                                                        const Gazetteer& gazetteer) {
  const std::size_t n = sentence.size();
  std::vector<std::vector<std::string>> matches(n);
  if (gazetteer.empty()) return matches;
  std::vector<std::string> lowered;
  lowered.reserve(n);
  for (const auto& token : sentence.tokens) lowered.push_back(unicode::to_lower(token.surface));

  for (const auto& [type, phrases] : gazetteer.entries()) {
    const std::size_t longest = gazetteer.max_length(type);
    std::size_t i = 0;
    while (i < n) {
      std::size_t matched = 0;
      for (std::size_t len = std::min(longest, n - i); len >= 1; --len) {
        std::string phrase = lowered[i];
        for (std::size_t k = 1; k < len; ++k) {
          phrase += ' ';
          phrase += lowered[i + k];
        }
        if (phrases.count(phrase)) {
          matched = len;
          break;
        }
      }
      if (matched == 0) {
        ++i;
        continue;
      }
      for (std::size_t k = i; k < i + matched; ++k) matches[k].push_back(type);
      i += matched;
    }
  }
  return matches;
}

namespace {

std::string offset_name(const char* family, int offset) {
  return std::string(family) + (offset > 0 ? "+" : "") + std::to_string(offset) + "=";
}

}  // namespace

std::vector<std::string> token_features(const Sentence& sentence, std::size_t position,
                                        const FeatureConfig& config,
                                        const std::vector<std::vector<std::string>>& matches) {
  const auto& word = sentence.tokens.at(position).surface;
  const std::string lower = unicode::to_lower(word);
  const std::u32string cps = unicode::decode(lower);
  const std::u32string original = unicode::decode(word);

  std::vector<std::string> out;
  out.reserve(24 + 4 * static_cast<std::size_t>(config.window));
  out.push_back("w0=" + lower);
  if (config.use_shape) out.push_back("sh0=" + word_shape(word));

  for (int k = 1; k <= config.affix_length && static_cast<std::size_t>(k) <= cps.size(); ++k) {
    out.push_back("p" + std::to_string(k) + "=" + unicode::encode(std::u32string_view(cps).substr(0, k)));
    out.push_back("s" + std::to_string(k) + "=" +
                  unicode::encode(std::u32string_view(cps).substr(cps.size() - k)));
  }

  const bool all_digit = std::all_of(original.begin(), original.end(), unicode::is_digit);
  const bool has_digit = std::any_of(original.begin(), original.end(), unicode::is_digit);
  const bool all_punct = std::all_of(original.begin(), original.end(), unicode::is_punct);
  const bool has_alpha = std::any_of(original.begin(), original.end(), unicode::is_alpha);
  const bool title = !original.empty() && unicode::is_upper(original[0]) &&
                     std::none_of(original.begin() + 1, original.end(), unicode::is_upper);
  const bool upper = has_alpha && std::none_of(original.begin(), original.end(), unicode::is_lower);
  if (all_digit) out.push_back("isdigit");
  if (has_digit) out.push_back("hasdigit");
  if (all_punct) out.push_back("ispunct");
  if (title) out.push_back("istitle");
  if (upper) out.push_back("isupper");

  const auto n = static_cast<long>(sentence.size());
  for (int offset = -config.window; offset <= config.window; ++offset) {
    if (offset == 0) continue;
    const long at = static_cast<long>(position) + offset;
    const char* boundary = offset < 0 ? "<BOS>" : "<EOS>";
    if (at < 0 || at >= n) {
      out.push_back(offset_name("w", offset) + boundary);
      if (config.use_shape) out.push_back(offset_name("sh", offset) + boundary);
    } else {
      const auto& other = sentence.tokens[static_cast<std::size_t>(at)].surface;
      out.push_back(offset_name("w", offset) + unicode::to_lower(other));
      if (config.use_shape) out.push_back(offset_name("sh", offset) + word_shape(other));
    }
  }

  if (config.use_gazetteer) {
    for (const auto& type : matches.at(position)) out.push_back("gaz=" + type);
  }
  out.push_back("bias");
  return out;
}

std::vector<std::string> token_features(const Sentence& sentence, std::size_t position,
                                        const FeatureConfig& config, const Gazetteer& gazetteer) {
  if (position >= sentence.size()) {
    throw Error(ErrorCode::kOutOfBounds, "position " + std::to_string(position));
  }
  return token_features(sentence, position, config, gazetteer_matches(sentence, gazetteer));
}

FeatureIndex fit_index(const std::vector<Document>& docs, const FeatureConfig& config,
                       const Gazetteer& gazetteer) {
  config.validate();
  FeatureIndex index;
  for (const auto& doc : docs) {
    for (const auto& sentence : doc.sentences) {
      const auto matches = gazetteer_matches(sentence, gazetteer);
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        for (const auto& feature : token_features(sentence, i, config, matches)) index.add(feature);
      }
    }
  }
  index.freeze();
  return index;
}

SentenceFeatures featurize(const Sentence& sentence, const FeatureIndex& index,
                           const FeatureConfig& config, const Gazetteer& gazetteer) {
  const auto matches = gazetteer_matches(sentence, gazetteer);
  SentenceFeatures out(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    for (const auto& feature : token_features(sentence, i, config, matches)) {
      if (auto id = index.lookup(feature)) out[i].push_back(*id);
    }
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

}  // namespace seqtag
