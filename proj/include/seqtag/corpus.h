#ifndef SEQTAG_CORPUS_H_
#define SEQTAG_CORPUS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace seqtag {

struct Token {
  std::string surface;
  std::optional<std::string> gold_tag;
  std::optional<std::string> pred_tag;
  // Code point offsets into Document::source_text, when known.
  std::optional<std::size_t> char_start;
  std::optional<std::size_t> char_end;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::optional<std::string> source_text;

  std::size_t num_tokens() const;
  bool operator==(const Document&) const = default;
};

// Token span [start, end) of one entity within a sentence.
struct Entity {
  std::string type_name;
  std::size_t sent_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  bool operator==(const Entity&) const = default;
};

enum class TagField { kGold, kPred };

// Tags of one sentence from the selected field; throws Error(kMissingTag).
std::vector<std::string> sentence_tags(const Sentence& sentence, TagField field);

// Surface text of tokens [start, end) joined by single spaces.
std::string join_surfaces(const Sentence& sentence, std::size_t start, std::size_t end);

// Unicode simple lowercase of every surface; tags untouched.
std::vector<Document> lowercase_corpus(std::vector<Document> docs);

}  // namespace seqtag

#endif  // SEQTAG_CORPUS_H_
