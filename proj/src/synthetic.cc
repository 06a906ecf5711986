#include "seqtag/synthetic.h"

#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>

#include "seqtag/unicode.h"

namespace seqtag {
namespace {

// mt19937_64 output is fully specified by the standard; distributions are
// not, so draws are reduced by modulo to stay identical across toolchains.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[below(N)];
  }

 private:
  std::mt19937_64 engine_;
};

using Phrase = std::vector<std::string>;

constexpr std::array<std::string_view, 18> kActions = {
    "add", "mix", "incubate", "centrifuge", "remove", "place", "transfer", "wash", "dissect",
    "spin", "resuspend", "vortex", "discard", "melt", "harden", "spread", "store", "collect"};
constexpr std::array<std::string_view, 12> kReagents = {
    "DNA", "ethanol", "host culture", "viral concentrate", "soft agar", "PBS",
    "lysis buffer", "supernatant", "RNA", "water", "proteinase K", "TE buffer"};
constexpr std::array<std::string_view, 6> kVolumeUnits = {"mL", "µL", "ul", "mg", "g", "ng"};
constexpr std::array<std::string_view, 6> kTimeUnits = {"min", "minutes", "h", "hours", "seconds", "s"};
constexpr std::array<std::string_view, 5> kMethods = {"extraction", "PCR", "gel electrophoresis",
                                                      "plaque assay", "qPCR"};
constexpr std::array<std::string_view, 5> kModifiers = {"high quality genomic", "fresh", "sterile",
                                                        "cold", "gently"};
constexpr std::array<std::string_view, 6> kDevices = {"flow cytometer", "water bath", "microcentrifuge",
                                                      "thermocycler", "incubator", "spectrophotometer"};
constexpr std::array<std::string_view, 5> kMentions = {"it", "them", "ethanol wash", "contents", "this"};
constexpr std::array<std::string_view, 6> kLocations = {"tube", "plate", "agar plate", "bench",
                                                        "column", "falcon tube"};
constexpr std::array<std::string_view, 5> kMeasureTypes = {"volume", "OD600", "absorbance", "weight",
                                                           "density"};
constexpr std::array<std::string_view, 5> kSeals = {"bottle cap", "lid", "parafilm", "cap", "foil"};
constexpr std::array<std::string_view, 16> kFillers = {
    "to", "the", "of", "and", "for", "at", "with", "into", "in", "on", "from", ",", "then",
    "until", "by", "each"};

Phrase words(std::string_view text) {
  Phrase out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find(' ', pos);
    if (next == std::string_view::npos) next = text.size();
    if (next > pos) out.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string number(Draw& draw) {
  switch (draw.below(4)) {
    case 0: return std::to_string(1 + draw.below(100));
    case 1: return std::to_string(draw.below(10)) + "." + std::to_string(draw.below(10));
    case 2: {
      auto lo = 1 + draw.below(9);
      return std::to_string(lo) + "-" + std::to_string(lo + 1 + draw.below(20));
    }
    default: return std::to_string(10 * (1 + draw.below(50)));
  }
}

Phrase wetlab_phrase(std::string_view type, Draw& draw) {
  if (type == "Action") return words(draw.pick(kActions));
  if (type == "Reagent") return words(draw.pick(kReagents));
  if (type == "Amount") return {number(draw), std::string(draw.pick(kVolumeUnits))};
  if (type == "Time") {
    if (draw.chance(10)) return {"overnight"};
    return {number(draw), std::string(draw.pick(kTimeUnits))};
  }
  if (type == "Temperature") {
    if (draw.chance(15)) return {"RT"};
    auto t = std::to_string(4 + draw.below(95));
    return draw.chance(50) ? Phrase{t + "C"} : Phrase{t, "°C"};
  }
  if (type == "Speed") {
    auto s = std::to_string(100 * (1 + draw.below(150)));
    switch (draw.below(3)) {
      case 0: return {s + "xg"};
      case 1: return {s, "rpm"};
      default: return {s, "x", "g"};
    }
  }
  if (type == "Concentration") {
    auto c = number(draw);
    switch (draw.below(3)) {
      case 0: return {c + "%"};
      case 1: return {c, "mM"};
      default: return {c, "M"};
    }
  }
  if (type == "Size") {
    if (draw.chance(50)) return {draw.chance(50) ? "0.45" : "0.22", "µm"};
    return {std::to_string(6 * (1 + draw.below(16))) + "-well"};
  }
  if (type == "Method") return words(draw.pick(kMethods));
  if (type == "Modifier") return words(draw.pick(kModifiers));
  if (type == "Device") return words(draw.pick(kDevices));
  if (type == "Mention") return words(draw.pick(kMentions));
  if (type == "Location") return words(draw.pick(kLocations));
  if (type == "Numerical") {
    if (draw.chance(20)) return {"twice"};
    return {std::to_string(2 + draw.below(9)), draw.chance(50) ? "times" : "rounds"};
  }
  if (type == "Measure-Type") return words(draw.pick(kMeasureTypes));
  if (type == "Generic-Measure") {
    if (draw.chance(50)) return {"TFSC=" + std::to_string(10 * (1 + draw.below(9)))};
    return {std::to_string(100 * (1 + draw.below(20))), "bp"};
  }
  if (type == "Seal") return words(draw.pick(kSeals));
  if (type == "pH") return {"pH", std::to_string(4 + draw.below(7)) + "." + std::to_string(draw.below(10))};
  return {};
}

Phrase entity_phrase(std::string_view type, Draw& draw) {
  auto phrase = wetlab_phrase(type, draw);
  if (!phrase.empty()) return phrase;
  const std::string stem = unicode::to_lower(type);
  Phrase out{stem + "_" + std::to_string(draw.below(5))};
  if (draw.chance(30)) out.push_back(stem + "_tail");
  return out;
}

void append_entity(Sentence& sentence, const Phrase& phrase, const std::string& type) {
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    Token token;
    token.surface = phrase[i];
    token.gold_tag = (i == 0 ? "B-" : "I-") + type;
    sentence.tokens.push_back(std::move(token));
  }
}

void append_filler(Sentence& sentence, std::string_view word) {
  Token token;
  token.surface = std::string(word);
  token.gold_tag = "O";
  sentence.tokens.push_back(std::move(token));
}

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
  return word;
}

}  // namespace

std::vector<Document> generate_synthetic(std::uint64_t seed, std::size_t n_docs,
                                         const LabelScheme& scheme) {
  Draw draw(seed);
  const auto& types = scheme.entity_types();
  const auto action = scheme.type_index("Action");
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof(id), "protocol_%04zu", d + 1);
    doc.id = id;
    const std::size_t n_sentences = 3 + draw.below(6);
    for (std::size_t s = 0; s < n_sentences; ++s) {
      Sentence sentence;
      if (action && draw.chance(85)) {
        auto phrase = entity_phrase("Action", draw);
        phrase[0] = capitalize(phrase[0]);
        append_entity(sentence, phrase, "Action");
      } else {
        append_filler(sentence, draw.chance(50) ? "Then" : "Next");
      }
      const std::size_t segments = types.empty() ? 0 : 1 + draw.below(4);
      for (std::size_t k = 0; k < segments; ++k) {
        append_filler(sentence, draw.pick(kFillers));
        if (draw.chance(25)) append_filler(sentence, draw.pick(kFillers));
        // The first sentence of document d carries type d mod |types|, so a
        // corpus of at least |types| documents covers every type.
        const std::size_t type = (s == 0 && k == 0)
                                     ? d % types.size()
                                     : draw.below(types.size());
        append_entity(sentence, entity_phrase(types[type], draw), types[type]);
      }
      append_filler(sentence, ".");
      doc.sentences.push_back(std::move(sentence));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace seqtag
