#ifndef SEQTAG_CONLL_H_
#define SEQTAG_CONLL_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/label_scheme.h"

namespace seqtag {

// CoNLL layout: `surface<TAB>tag` per token, blank line between sentences.
// Lines starting with '#' and containing no TAB are comments, except
// `#doc <id>`, which starts a new document. Text before the first `#doc`
// belongs to a document named `default_id`.
struct ConllReadOptions {
  std::string default_id = "doc";
  // When false, single-column `surface` lines are accepted without a tag.
  bool require_tags = true;
};

std::vector<Document> parse_conll(std::istream& input, const LabelScheme& scheme,
                                  const ConllReadOptions& options = {});
std::vector<Document> parse_conll(std::string_view text, const LabelScheme& scheme,
                                  const ConllReadOptions& options = {});

// Emits `#doc <id>` before every document and a blank line after every
// sentence. Throws Error(kMissingTag) if a token lacks the selected tag.
std::string serialize_conll(const std::vector<Document>& docs, TagField which);

// Reads one .conll file, or every *.conll file of a directory in name order.
// Documents without a `#doc` line take the file stem as id.
std::vector<Document> read_conll_path(const std::filesystem::path& path, const LabelScheme& scheme,
                                      bool require_tags = true);

}  // namespace seqtag

#endif  // SEQTAG_CONLL_H_
