#include "seqtag/corpus.h"

#include "seqtag/error.h"
#include "seqtag/unicode.h"

namespace seqtag {

std::size_t Document::num_tokens() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::vector<std::string> sentence_tags(const Sentence& sentence, TagField field) {
  std::vector<std::string> tags;
  tags.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto& tag = field == TagField::kGold ? sentence.tokens[i].gold_tag
                                               : sentence.tokens[i].pred_tag;
    if (!tag) {
      throw Error(ErrorCode::kMissingTag, "token " + std::to_string(i) + " (" +
                                              sentence.tokens[i].surface + ")");
    }
    tags.push_back(*tag);
  }
  return tags;
}

std::string join_surfaces(const Sentence& sentence, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out.push_back(' ');
    out += sentence.tokens[i].surface;
  }
  return out;
}

std::vector<Document> lowercase_corpus(std::vector<Document> docs) {
  for (auto& doc : docs) {
    for (auto& sentence : doc.sentences) {
      for (auto& token : sentence.tokens) token.surface = unicode::to_lower(token.surface);
    }
  }
  return docs;
}

}  // namespace seqtag
