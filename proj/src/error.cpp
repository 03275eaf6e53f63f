#include "ogn/error.hpp"

namespace ogn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kUndefinedSimilarity: return "undefined similarity";
    case ErrorCode::kUndefinedMetric: return "undefined metric";
    case ErrorCode::kGeneration: return "generation failed";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported version";
    case ErrorCode::kUnsupportedDtype: return "unsupported dtype";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kDimOverflow: return "dimension overflow";
    case ErrorCode::kTrailingData: return "trailing data";
    case ErrorCode::kSchema: return "schema violation";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

}  // namespace ogn
