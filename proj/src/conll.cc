#include "seqtag/conll.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "seqtag/error.h"
#include "seqtag/unicode.h"

namespace seqtag {
namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; });
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no); }

class ConllBuilder {
 public:
  explicit ConllBuilder(std::string default_id) { current_.id = std::move(default_id); }

  void end_sentence() {
    if (!sentence_.tokens.empty()) current_.sentences.push_back(std::move(sentence_));
    sentence_ = {};
  }

  void start_document(std::string id, std::size_t line_no) {
    finish_document(line_no);
    current_ = {};
    current_.id = std::move(id);
    explicit_ = true;
  }

  void finish_document(std::size_t line_no) {
    end_sentence();
    if (current_.sentences.empty()) {
      if (explicit_) {
        throw Error(ErrorCode::kEmptyDocument,
                    "document '" + current_.id + "' ending at " + at_line(line_no));
      }
      return;
    }
    docs_.push_back(std::move(current_));
    current_ = {};
  }

  void add(Token token) { sentence_.tokens.push_back(std::move(token)); }

  std::vector<Document> take() { return std::move(docs_); }

 private:
  std::vector<Document> docs_;
  Document current_;
  Sentence sentence_;
  bool explicit_ = false;
};

}  // namespace

std::vector<Document> parse_conll(std::istream& input, const LabelScheme& scheme,
                                  const ConllReadOptions& options) {
  ConllBuilder builder(options.default_id);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1) view = unicode::strip_bom(view);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);

    if (is_blank(view)) {
      builder.end_sentence();
      continue;
    }
    if (view.front() == '#' && view.find('\t') == std::string_view::npos) {
      builder.end_sentence();
      if (view.substr(0, 5) == "#doc ") {
        std::string id(view.substr(5));
        if (id.empty()) throw Error(ErrorCode::kMalformedLine, at_line(line_no) + ": empty #doc id");
        builder.start_document(std::move(id), line_no);
      }
      continue;
    }

    const auto tab = view.find('\t');
    Token token;
    if (tab == std::string_view::npos) {
      if (options.require_tags) {
        throw Error(ErrorCode::kMalformedLine, at_line(line_no) + ": expected surface<TAB>tag");
      }
      token.surface = std::string(view);
    } else {
      auto tag = view.substr(tab + 1);
      if (tag.find('\t') != std::string_view::npos) {
        throw Error(ErrorCode::kMalformedLine, at_line(line_no) + ": more than two columns");
      }
      token.surface = std::string(view.substr(0, tab));
      if (!scheme.tag_index(tag)) {
        throw Error(ErrorCode::kUnknownTag, "'" + std::string(tag) + "' at " + at_line(line_no));
      }
      token.gold_tag = std::string(tag);
    }
    if (token.surface.empty()) {
      throw Error(ErrorCode::kMalformedLine, at_line(line_no) + ": empty surface");
    }
    builder.add(std::move(token));
  }
  builder.finish_document(line_no);
  auto docs = builder.take();
  if (docs.empty()) throw Error(ErrorCode::kEmptyDocument, "no sentences in input");
  return docs;
}

std::vector<Document> parse_conll(std::string_view text, const LabelScheme& scheme,
                                  const ConllReadOptions& options) {
  std::istringstream input{std::string(text)};
  return parse_conll(input, scheme, options);
}

std::string serialize_conll(const std::vector<Document>& docs, TagField which) {
  std::string out;
  for (const auto& doc : docs) {
    out += "#doc ";
    out += doc.id;
    out += '\n';
    for (const auto& sentence : doc.sentences) {
      auto tags = sentence_tags(sentence, which);
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        const auto& surface = sentence.tokens[i].surface;
        if (surface.find_first_of("\t\n") != std::string::npos) {
          throw Error(ErrorCode::kMalformedLine, "surface contains TAB or newline: " + surface);
        }
        out += surface;
        out += '\t';
        out += tags[i];
        out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<Document> read_conll_path(const std::filesystem::path& path, const LabelScheme& scheme,
                                      bool require_tags) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".conll") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::kIo, "no .conll files in " + path.string());
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw Error(ErrorCode::kIo, "no such file or directory: " + path.string());
  }

  std::vector<Document> docs;
  for (const auto& file : files) {
    std::ifstream input(file, std::ios::binary);
    if (!input) throw Error(ErrorCode::kIo, "cannot open " + file.string());
    ConllReadOptions options;
    options.default_id = file.stem().string();
    options.require_tags = require_tags;
    try {
      auto part = parse_conll(input, scheme, options);
      std::move(part.begin(), part.end(), std::back_inserter(docs));
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.detail());
    }
  }
  return docs;
}

}  // namespace seqtag
