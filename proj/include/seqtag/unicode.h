#ifndef SEQTAG_UNICODE_H_
#define SEQTAG_UNICODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace seqtag::unicode {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD, one per byte.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append_utf8(char32_t cp, std::string& out);

// Unicode simple lowercase mapping, applied per code point.
std::string to_lower(std::string_view text);

bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_digit(char32_t cp);
bool is_alpha(char32_t cp);
bool is_space(char32_t cp);
bool is_punct(char32_t cp);

// Removes a leading UTF-8 byte order mark, if any.
std::string_view strip_bom(std::string_view text);

}  // namespace seqtag::unicode

#endif  // SEQTAG_UNICODE_H_
