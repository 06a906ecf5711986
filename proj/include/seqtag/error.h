#ifndef SEQTAG_ERROR_H_
#define SEQTAG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqtag {

enum class ErrorCode {
  kMalformedLine,
  kUnknownTag,
  kEmptyDocument,
  kMissingTag,
  kOffsetOutOfBounds,
  kSurfaceMismatch,
  kMisalignedSpan,
  kInvalidBio,
  kOverlappingEntities,
  kOutOfBounds,
  kDimensionMismatch,
  kAllPathsMasked,
  kNonFiniteLoss,
  kVersionMismatch,
  kCorruptFile,
  kTokenizationMismatch,
  kSchemeMismatch,
  kInvalidConfig,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as seqtag::Error; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // Message without the error-code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace seqtag

#endif  // SEQTAG_ERROR_H_
