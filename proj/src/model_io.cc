#include "model_io.h"

#include <charconv>
#include <cmath>
#include <vector>

#include "seqtag/error.h"
#include "seqtag/unicode.h"

namespace seqtag::model_io {

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::hex);
  return std::string(buf, ptr);
}

void write_reals(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_real(values[i]);
  }
  out << '\n';
}

void write_scheme(std::ostream& out, const LabelScheme& scheme) {
  out << "types " << scheme.num_types() << '\n';
  for (const auto& type : scheme.entity_types()) out << type << '\n';
}

Reader::Reader(std::istream& in, std::string_view magic) : in_(in) {
  std::string first;
  if (!std::getline(in_, first)) throw Error(ErrorCode::kCorruptFile, "empty model file");
  line_no_ = 1;
  std::string_view view = unicode::strip_bom(first);
  if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
  if (view == magic) return;
  if (view.substr(0, 7) == "seqtag-") {
    throw Error(ErrorCode::kVersionMismatch,
                "expected " + std::string(magic) + ", found " + std::string(view));
  }
  throw Error(ErrorCode::kCorruptFile, "bad magic line");
}

void Reader::fail(const std::string& message) const {
  throw Error(ErrorCode::kCorruptFile, "line " + std::to_string(line_no_) + ": " + message);
}

std::string Reader::line() {
  std::string text;
  while (true) {
    if (!std::getline(in_, text)) fail("unexpected end of file");
    ++line_no_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    // Comment lines may only appear in the header block.
    if (line_no_ > 1 && !text.empty() && text.front() == '#' && !past_header_) continue;
    past_header_ = true;
    return text;
  }
}

std::string Reader::field(std::string_view key) {
  std::string text = line();
  if (text.size() < key.size() + 1 || text.compare(0, key.size(), key) != 0 ||
      text[key.size()] != ' ') {
    fail("expected '" + std::string(key) + "'");
  }
  return text.substr(key.size() + 1);
}

long Reader::integer(std::string_view key) {
  const std::string value = field(key);
  long parsed = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) fail("bad integer for " + std::string(key));
  return parsed;
}

std::size_t Reader::count(std::string_view key) {
  const long value = integer(key);
  if (value < 0) fail("negative count for " + std::string(key));
  return static_cast<std::size_t>(value);
}

void Reader::reals(std::span<double> out) {
  const std::string text = line();
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0) {
      if (p == end || *p != ' ') fail("expected " + std::to_string(out.size()) + " reals");
      ++p;
    }
    auto [ptr, ec] = std::from_chars(p, end, out[i], std::chars_format::hex);
    if (ec != std::errc() || !std::isfinite(out[i])) fail("bad real");
    p = ptr;
  }
  if (p != end) fail("trailing data after reals");
}

LabelScheme Reader::scheme() {
  const std::size_t n = count("types");
  std::vector<std::string> types;
  types.reserve(n);
  for (std::size_t i = 0; i < n; ++i) types.push_back(line());
  try {
    return LabelScheme(std::move(types));
  } catch (const Error& e) {
    fail(e.detail());
  }
}

void Reader::expect_end() {
  if (line() != "end") fail("expected 'end'");
}

}  // namespace seqtag::model_io
