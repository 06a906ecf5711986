#ifndef SEQTAG_IO_H_
#define SEQTAG_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace seqtag {

inline constexpr const char* kToolkitVersion = "0.1.0";

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string config_hash(std::string_view canonical_config);

// `seqtag <version> config=<hash> <extra>`, without the leading '#'.
std::string header_comment(std::string_view canonical_config, std::string_view extra = {});

}  // namespace seqtag

#endif  // SEQTAG_IO_H_
