#ifndef SEQTAG_BRAT_H_
#define SEQTAG_BRAT_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/error.h"
#include "seqtag/label_scheme.h"

namespace seqtag {

struct TokenSpan {
  std::string text;
  std::size_t start = 0;  // code point offsets, half-open
  std::size_t end = 0;
};

// Splits raw text into sentences of tokens.
using Tokenizer = std::function<std::vector<std::vector<TokenSpan>>(std::string_view)>;

// One sentence per non-blank line; tokens split on whitespace, then every
// leading and trailing punctuation character becomes its own token.
std::vector<std::vector<TokenSpan>> protocol_tokenize(std::string_view text);

struct BratDiagnostic {
  enum class Kind { kIgnoredLine, kOverlapDiscarded, kDropped };
  Kind kind;
  std::string annotation_id;
  std::string message;
};

struct BratOptions {
  std::string id = "doc";
  // Strict: alignment errors throw. Lenient: the annotation is dropped and
  // a kDropped diagnostic is recorded instead.
  bool strict = true;
};

struct BratConversion {
  Document document;
  std::vector<BratDiagnostic> diagnostics;
};

// Aligns T-line annotations of a .ann file onto tokens of the .txt text and
// emits BIO gold tags. Overlapping spans keep the earlier-starting (then
// longer) one. Errors: kOffsetOutOfBounds, kSurfaceMismatch, kMisalignedSpan,
// kUnknownTag (entity type not in the scheme), kMalformedLine.
BratConversion parse_brat(std::string_view txt, std::string_view ann, const LabelScheme& scheme,
                          const Tokenizer& tokenizer = protocol_tokenize,
                          const BratOptions& options = {});

}  // namespace seqtag

#endif  // SEQTAG_BRAT_H_
