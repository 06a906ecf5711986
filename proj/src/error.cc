#include "seqtag/error.h"

namespace seqtag {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kMissingTag: return "MissingTag";
    case ErrorCode::kOffsetOutOfBounds: return "OffsetOutOfBounds";
    case ErrorCode::kSurfaceMismatch: return "SurfaceMismatch";
    case ErrorCode::kMisalignedSpan: return "MisalignedSpan";
    case ErrorCode::kInvalidBio: return "InvalidBio";
    case ErrorCode::kOverlappingEntities: return "OverlappingEntities";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAllPathsMasked: return "AllPathsMasked";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kTokenizationMismatch: return "TokenizationMismatch";
    case ErrorCode::kSchemeMismatch: return "SchemeMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace seqtag
