#include "seqtag/brat.h"

#include <algorithm>
#include <charconv>
#include <optional>

#include "seqtag/unicode.h"

namespace seqtag {
namespace {

struct Annotation {
  std::string id;
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::size_t order = 0;
  // Aligned token range.
  std::size_t sentence = 0;
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::optional<std::size_t> parse_offset(std::string_view s) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::vector<std::vector<TokenSpan>> protocol_tokenize(std::string_view text) {
  const std::u32string cps = unicode::decode(text);
  std::vector<std::vector<TokenSpan>> sentences;
  std::vector<TokenSpan> current;
  auto emit = [&](std::size_t a, std::size_t b) {
    current.push_back({unicode::encode(std::u32string_view(cps).substr(a, b - a)), a, b});
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    if (cps[i] == U'\n' || cps[i] == U'\r') {
      if (!current.empty()) sentences.push_back(std::move(current));
      current.clear();
      ++i;
      continue;
    }
    if (unicode::is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !unicode::is_space(cps[j]) && cps[j] != U'\n' && cps[j] != U'\r') ++j;
    std::size_t a = i;
    std::size_t b = j;
    while (a < b && unicode::is_punct(cps[a])) {
      emit(a, a + 1);
      ++a;
    }
    std::size_t core_end = b;
    while (core_end > a && unicode::is_punct(cps[core_end - 1])) --core_end;
    if (a < core_end) emit(a, core_end);
    for (std::size_t k = core_end; k < b; ++k) emit(k, k + 1);
    i = j;
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

BratConversion parse_brat(std::string_view txt, std::string_view ann, const LabelScheme& scheme,
                          const Tokenizer& tokenizer, const BratOptions& options) {
  using Kind = BratDiagnostic::Kind;
  BratConversion result;
  const std::string_view text = unicode::strip_bom(txt);
  const std::u32string cps = unicode::decode(text);
  const auto spans = tokenizer(text);

  auto fail = [&](ErrorCode code, const std::string& id, const std::string& message) {
    if (options.strict) throw Error(code, "annotation " + id + ": " + message);
    result.diagnostics.push_back({Kind::kDropped, id,
                                  std::string(error_code_name(code)) + ": " + message});
  };

  std::vector<Annotation> annotations;
  std::size_t line_no = 0;
  for (std::string_view line : split(unicode::strip_bom(ann), '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() != 'T') {
      result.diagnostics.push_back({Kind::kIgnoredLine, std::string(split(line, '\t')[0]),
                                    "only text-bound (T) annotations are used"});
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorCode::kMalformedLine, "ann line " + std::to_string(line_no) +
                                                 ": expected 3 TAB-separated fields");
    }
    Annotation a;
    a.id = std::string(fields[0]);
    a.surface = std::string(fields[2]);
    a.order = annotations.size();
    auto middle = fields[1];
    if (middle.find(';') != std::string_view::npos) {
      result.diagnostics.push_back({Kind::kIgnoredLine, a.id, "discontinuous span not supported"});
      continue;
    }
    auto parts = split(middle, ' ');
    std::optional<std::size_t> start;
    std::optional<std::size_t> end;
    if (parts.size() == 3) {
      start = parse_offset(parts[1]);
      end = parse_offset(parts[2]);
    }
    if (!start || !end) {
      throw Error(ErrorCode::kMalformedLine,
                  "ann line " + std::to_string(line_no) + ": expected '<Type> <start> <end>'");
    }
    a.type = std::string(parts[0]);
    a.start = *start;
    a.end = *end;

    if (!scheme.type_index(a.type)) {
      fail(ErrorCode::kUnknownTag, a.id, "entity type " + a.type);
      continue;
    }
    if (a.start >= a.end || a.end > cps.size()) {
      fail(ErrorCode::kOffsetOutOfBounds, a.id,
           std::to_string(a.start) + ".." + std::to_string(a.end) + " in text of length " +
               std::to_string(cps.size()));
      continue;
    }
    const std::string slice = unicode::encode(std::u32string_view(cps).substr(a.start, a.end - a.start));
    if (slice != a.surface) {
      fail(ErrorCode::kSurfaceMismatch, a.id, "'" + a.surface + "' vs text '" + slice + "'");
      continue;
    }

    bool found = false;
    bool misaligned = false;
    for (std::size_t s = 0; s < spans.size() && !misaligned; ++s) {
      for (std::size_t t = 0; t < spans[s].size(); ++t) {
        const auto& tok = spans[s][t];
        if (tok.end <= a.start || tok.start >= a.end) continue;
        if (tok.start < a.start || tok.end > a.end || (found && s != a.sentence)) {
          misaligned = true;
          break;
        }
        if (!found) {
          found = true;
          a.sentence = s;
          a.first = t;
        }
        a.last = t + 1;
      }
    }
    if (misaligned || !found) {
      fail(ErrorCode::kMisalignedSpan, a.id,
           "span " + std::to_string(a.start) + ".." + std::to_string(a.end) +
               " does not cover whole tokens of one sentence");
      continue;
    }
    annotations.push_back(std::move(a));
  }

  std::sort(annotations.begin(), annotations.end(), [](const Annotation& x, const Annotation& y) {
    if (x.start != y.start) return x.start < y.start;
    if (x.end - x.start != y.end - y.start) return x.end - x.start > y.end - y.start;
    return x.order < y.order;
  });

  Document& doc = result.document;
  doc.id = options.id;
  doc.source_text = std::string(text);
  for (const auto& sentence_spans : spans) {
    Sentence sentence;
    for (const auto& span : sentence_spans) {
      Token token;
      token.surface = span.text;
      token.gold_tag = "O";
      token.char_start = span.start;
      token.char_end = span.end;
      sentence.tokens.push_back(std::move(token));
    }
    doc.sentences.push_back(std::move(sentence));
  }

  std::vector<const Annotation*> kept;
  for (const auto& a : annotations) {
    auto clash = std::find_if(kept.begin(), kept.end(), [&](const Annotation* k) {
      return k->sentence == a.sentence && k->first < a.last && a.first < k->last;
    });
    if (clash != kept.end()) {
      result.diagnostics.push_back({Kind::kOverlapDiscarded, a.id, "overlaps " + (*clash)->id});
      continue;
    }
    kept.push_back(&a);
    auto& tokens = doc.sentences[a.sentence].tokens;
    for (std::size_t t = a.first; t < a.last; ++t) {
      tokens[t].gold_tag = (t == a.first ? "B-" : "I-") + a.type;
    }
  }
  return result;
}

}  // namespace seqtag
