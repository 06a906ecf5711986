#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include "doctest.h"
#include "seqtag/bio.h"
#include "seqtag/brat.h"
#include "seqtag/conll.h"
#include "seqtag/error.h"
#include "seqtag/synthetic.h"

using namespace seqtag;

namespace {

const LabelScheme& wetlab() {
  static const LabelScheme scheme = LabelScheme::wetlab();
  return scheme;
}

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected seqtag::Error");
  return ErrorCode::kIo;
}

std::vector<std::string> gold_tags(const Document& doc, std::size_t s = 0) {
  return sentence_tags(doc.sentences.at(s), TagField::kGold);
}

}  // namespace

TEST_CASE("wet-lab scheme has 37 tags with O at index 0") {
  const auto& scheme = wetlab();
  CHECK(scheme.num_types() == 18);
  CHECK(scheme.num_tags() == 37);
  CHECK(scheme.tag(0) == "O");
  for (std::size_t i = 0; i < scheme.num_tags(); ++i) {
    CHECK(scheme.tag_index(scheme.tag(static_cast<int>(i))) == static_cast<int>(i));
  }
  for (const auto& type : scheme.entity_types()) {
    const int b = *scheme.tag_index("B-" + type);
    CHECK(scheme.tag_index("I-" + type) == b + 1);
    CHECK(LabelScheme::type_of(b) == *scheme.type_index(type));
  }
  CHECK(scheme.entity_types().front() == "Method");
  CHECK(scheme.entity_types().back() == "pH");
  CHECK_FALSE(scheme.tag_index("B-Measure"));
}

TEST_CASE("duplicate entity types are rejected") {
  CHECK(error_of([] { LabelScheme({"A", "A"}); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("parse_conll reads a single token") {
  auto docs = parse_conll("dissect\tB-Action\n", wetlab());
  REQUIRE(docs.size() == 1);
  REQUIRE(docs[0].sentences.size() == 1);
  const auto& token = docs[0].sentences[0].tokens.at(0);
  CHECK(token.surface == "dissect");
  CHECK(token.gold_tag == "B-Action");
}

TEST_CASE("parse_conll errors") {
  CHECK(error_of([] { parse_conll("", wetlab()); }) == ErrorCode::kEmptyDocument);
  CHECK(error_of([] { parse_conll("\n\n#comment\n", wetlab()); }) == ErrorCode::kEmptyDocument);
  CHECK(error_of([] { parse_conll("a\tO\nb\n", wetlab()); }) == ErrorCode::kMalformedLine);
  CHECK(error_of([] { parse_conll("a\tO\tx\n", wetlab()); }) == ErrorCode::kMalformedLine);
  CHECK(error_of([] { parse_conll("a\tB-Measure\n", wetlab()); }) == ErrorCode::kUnknownTag);
  CHECK(error_of([] { parse_conll("#doc a\n#doc b\nx\tO\n", wetlab()); }) ==
        ErrorCode::kEmptyDocument);
  try {
    parse_conll("a\tO\n\nb\tB-Nope\n", wetlab());
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_conll splits sentences and documents") {
  const std::string text =
      "Add\tB-Action\n1.0\tB-Amount\nmL\tI-Amount\n\nSit\tB-Action\nRT\tB-Temperature\n";
  auto docs = parse_conll(text, wetlab());
  REQUIRE(docs.size() == 1);
  REQUIRE(docs[0].sentences.size() == 2);
  CHECK(docs[0].sentences[0].size() == 3);
  CHECK(docs[0].sentences[1].size() == 2);

  // Round trip through the canonical form.
  const std::string canonical = serialize_conll(docs, TagField::kGold);
  CHECK(canonical == "#doc doc\n" + text + "\n");
  CHECK(serialize_conll(parse_conll(canonical, wetlab()), TagField::kGold) == canonical);

  auto multi = parse_conll("#doc p1\na\tO\n\n#doc p2\nb\tO\n\nc\tO\n", wetlab());
  REQUIRE(multi.size() == 2);
  CHECK(multi[0].id == "p1");
  CHECK(multi[1].id == "p2");
  CHECK(multi[1].sentences.size() == 2);
}

TEST_CASE("parse_conll tolerates BOM, CRLF and header comments") {
  auto docs = parse_conll("\xEF\xBB\xBF# seqtag 0.1.0 config=x\r\nDNA\tB-Reagent\r\n\r\n", wetlab());
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].sentences[0].tokens[0].surface == "DNA");
  // A '#' token with a tag is data, not a comment.
  auto hash = parse_conll("#\tO\n", wetlab());
  CHECK(hash[0].sentences[0].tokens[0].surface == "#");
}

TEST_CASE("untagged input is accepted only when tags are optional") {
  ConllReadOptions options;
  options.require_tags = false;
  auto docs = parse_conll("Add\nDNA\n", wetlab(), options);
  CHECK_FALSE(docs[0].sentences[0].tokens[0].gold_tag);
  CHECK(error_of([] { parse_conll("Add\n", wetlab()); }) == ErrorCode::kMalformedLine);
}

TEST_CASE("serialize_conll of predicted tags") {
  Document doc;
  doc.id = "p";
  Sentence s;
  s.tokens.push_back({"dissect", std::nullopt, "B-Action", {}, {}});
  doc.sentences.push_back(s);
  CHECK(serialize_conll({doc}, TagField::kPred) == "#doc p\ndissect\tB-Action\n\n");
  CHECK(error_of([&] { serialize_conll({doc}, TagField::kGold); }) == ErrorCode::kMissingTag);
}

TEST_CASE("tags_to_spans and validate_bio") {
  std::vector<std::string> simple{"B-Action", "I-Action", "O"};
  auto spans = tags_to_spans(simple);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].type_name == "Action");
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 2);
  CHECK(validate_bio(std::vector<std::string>{"B-Action", "I-Action"}).empty());

  std::vector<std::string> orphan{"O", "I-Reagent"};
  CHECK(error_of([&] { tags_to_spans(orphan, BioMode::kStrict); }) == ErrorCode::kInvalidBio);
  auto repaired = tags_to_spans(orphan, BioMode::kRepair);
  REQUIRE(repaired.size() == 1);
  CHECK(repaired[0] == Entity{"Reagent", 0, 1, 2, ""});

  std::vector<std::string> crossed{"B-Action", "I-Mention"};
  CHECK(error_of([&] { tags_to_spans(crossed, BioMode::kStrict); }) == ErrorCode::kInvalidBio);
  auto violations = validate_bio(crossed);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].position == 1);
  CHECK(violations[0].previous == "B-Action");

  auto start = validate_bio(std::vector<std::string>{"I-Action"});
  REQUIRE(start.size() == 1);
  CHECK(start[0].position == 0);
  CHECK(start[0].previous == "<BOS>");
  CHECK(error_of([] { validate_bio(std::vector<std::string>{"X-Action"}); }) == ErrorCode::kUnknownTag);
}

TEST_CASE("spans_to_tags") {
  CHECK(spans_to_tags({}, 3) == std::vector<std::string>{"O", "O", "O"});
  std::vector<Entity> time{{"Time", 0, 0, 2, ""}};
  CHECK(spans_to_tags(time, 2) == std::vector<std::string>{"B-Time", "I-Time"});
  std::vector<Entity> overlap{{"Time", 0, 0, 2, ""}, {"Amount", 0, 1, 3, ""}};
  CHECK(error_of([&] { spans_to_tags(overlap, 3); }) == ErrorCode::kOverlappingEntities);
  CHECK(error_of([&] { spans_to_tags(time, 1); }) == ErrorCode::kOutOfBounds);
  std::vector<Entity> empty{{"Time", 0, 1, 1, ""}};
  CHECK(error_of([&] { spans_to_tags(empty, 3); }) == ErrorCode::kOutOfBounds);
}

TEST_CASE("spans round-trip and strict/valid equivalence on random inputs") {
  std::mt19937_64 rng(7);
  const auto& types = wetlab().entity_types();
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = rng() % 12;
    std::vector<Entity> entities;
    std::size_t pos = 0;
    while (pos < n) {
      pos += rng() % 3;
      if (pos >= n) break;
      const std::size_t len = 1 + rng() % std::min<std::size_t>(3, n - pos);
      entities.push_back({types[rng() % types.size()], 0, pos, pos + len, ""});
      pos += len;
    }
    auto tags = spans_to_tags(entities, n);
    CHECK(validate_bio(tags).empty());
    CHECK(tags_to_spans(tags, BioMode::kStrict) == entities);

    // Arbitrary tag strings: strict succeeds exactly when there are no violations.
    std::vector<std::string> noise(n);
    for (auto& tag : noise) tag = wetlab().tag(static_cast<int>(rng() % 5));
    bool strict_ok = true;
    try {
      tags_to_spans(noise, BioMode::kStrict);
    } catch (const Error&) {
      strict_ok = false;
    }
    CHECK(strict_ok == validate_bio(noise).empty());
    auto fixed = spans_to_tags(tags_to_spans(noise, BioMode::kRepair), n);
    CHECK(validate_bio(fixed).empty());
    auto spans = tags_to_spans(noise);
    CHECK(std::is_sorted(spans.begin(), spans.end(),
                         [](const Entity& a, const Entity& b) { return a.end <= b.start; }));
  }
}

TEST_CASE("repair_bio promotes orphan inside tags") {
  // O, I-Method, I-Modifier, I-Modifier
  std::vector<int> tags{0, 2, 4, 4};
  CHECK(repair_bio(tags) == 2);
  CHECK(tags == std::vector<int>{0, 1, 3, 4});
}

TEST_CASE("lowercase_corpus") {
  auto docs = parse_conll("DNA\tB-Reagent\nÄthanol\tI-Reagent\n", wetlab());
  auto lowered = lowercase_corpus(docs);
  CHECK(lowered[0].sentences[0].tokens[0].surface == "dna");
  CHECK(lowered[0].sentences[0].tokens[1].surface == "äthanol");
  CHECK(lowercase_corpus(lowered) == lowered);
  CHECK(gold_tags(lowered[0]) == gold_tags(docs[0]));
}

TEST_CASE("protocol tokenizer splits edge punctuation and keeps offsets") {
  auto sentences = protocol_tokenize("Incubate (top agar) at 47C.\nSit RT for 5 min.");
  REQUIRE(sentences.size() == 2);
  std::vector<std::string> words;
  for (const auto& t : sentences[0]) words.push_back(t.text);
  CHECK(words == std::vector<std::string>{"Incubate", "(", "top", "agar", ")", "at", "47C", "."});
  CHECK(sentences[0][1].start == 9);
  CHECK(sentences[0][6].start == 23);
  CHECK(sentences[0][6].end == 26);
  auto decimal = protocol_tokenize("1.0 mL");
  CHECK(decimal[0][0].text == "1.0");
  // Offsets count code points, not bytes.
  auto micro = protocol_tokenize("5 µL buffer");
  CHECK(micro[0][2].start == 5);
}

TEST_CASE("parse_brat aligns annotations") {
  auto one = parse_brat("dissect the tissue", "T1\tAction 0 7\tdissect", wetlab());
  CHECK(gold_tags(one.document) == std::vector<std::string>{"B-Action", "O", "O"});
  CHECK(one.document.sentences[0].tokens[0].char_end == 7u);

  auto none = parse_brat("dissect the tissue", "", wetlab());
  CHECK(gold_tags(none.document) == std::vector<std::string>{"O", "O", "O"});

  auto two = parse_brat("add host culture", "T1\tReagent 4 16\thost culture\n", wetlab());
  CHECK(gold_tags(two.document) == std::vector<std::string>{"O", "B-Reagent", "I-Reagent"});
}

TEST_CASE("parse_brat errors and lenient dropping") {
  const std::string txt = "dissect the tissue";
  CHECK(error_of([&] { parse_brat(txt, "T1\tAction 0 70\tdissect", wetlab()); }) ==
        ErrorCode::kOffsetOutOfBounds);
  CHECK(error_of([&] { parse_brat(txt, "T1\tAction 0 7\tdissect!", wetlab()); }) ==
        ErrorCode::kSurfaceMismatch);
  CHECK(error_of([&] { parse_brat(txt, "T1\tAction 0 3\tdis", wetlab()); }) ==
        ErrorCode::kMisalignedSpan);
  CHECK(error_of([&] { parse_brat(txt, "T1\tBogus 0 7\tdissect", wetlab()); }) ==
        ErrorCode::kUnknownTag);
  CHECK(error_of([&] { parse_brat(txt, "T1\tAction zero 7\tdissect", wetlab()); }) ==
        ErrorCode::kMalformedLine);

  BratOptions lenient;
  lenient.strict = false;
  auto out = parse_brat(txt, "T1\tAction 0 3\tdis\nT2\tReagent 12 18\ttissue\nR1\tUsing Arg1:T1 Arg2:T2\n",
                        wetlab(), protocol_tokenize, lenient);
  CHECK(gold_tags(out.document) == std::vector<std::string>{"O", "O", "B-Reagent"});
  REQUIRE(out.diagnostics.size() == 2);
  CHECK(out.diagnostics[0].kind == BratDiagnostic::Kind::kDropped);
  CHECK(out.diagnostics[0].annotation_id == "T1");
  CHECK(out.diagnostics[1].kind == BratDiagnostic::Kind::kIgnoredLine);
}

TEST_CASE("parse_brat keeps the earlier, then longer, of overlapping spans") {
  const std::string txt = "add host culture now";
  auto out = parse_brat(txt,
                        "T1\tReagent 9 16\tculture\n"
                        "T2\tReagent 4 16\thost culture\n"
                        "T3\tModifier 4 8\thost\n",
                        wetlab());
  CHECK(gold_tags(out.document) == std::vector<std::string>{"O", "B-Reagent", "I-Reagent", "O"});
  CHECK(out.diagnostics.size() == 2);
  for (const auto& d : out.diagnostics) CHECK(d.kind == BratDiagnostic::Kind::kOverlapDiscarded);
  CHECK(validate_bio(gold_tags(out.document)).empty());
}

TEST_CASE("synthetic corpus is deterministic, valid and covers all types") {
  auto a = generate_synthetic(42, 20, wetlab());
  auto b = generate_synthetic(42, 20, wetlab());
  CHECK(a == b);
  CHECK(generate_synthetic(43, 20, wetlab()) != a);
  std::set<std::string> seen;
  for (const auto& doc : a) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      CHECK(validate_bio(gold_tags(doc, s)).empty());
      for (const auto& e : sentence_entities(doc.sentences[s], TagField::kGold, s)) {
        seen.insert(e.type_name);
      }
    }
  }
  CHECK(seen.size() == 18);

  LabelScheme toy({"Alpha", "Beta"});
  auto small = generate_synthetic(1, 3, toy);
  const auto text = serialize_conll(small, TagField::kGold);
  CHECK(parse_conll(text, toy) == small);
}

TEST_CASE("synthetic corpus of 370 protocols is generated quickly") {
  const auto start = std::chrono::steady_clock::now();
  auto docs = generate_synthetic(42, 370, wetlab());
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(docs.size() == 370);
  CHECK(std::chrono::duration<double>(elapsed).count() < 1.0);
}
