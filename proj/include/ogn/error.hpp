#pragma once

#include <stdexcept>
#include <string>

namespace ogn {

enum class ErrorCode {
  kInvalidInput,
  kUndefinedSimilarity,
  kUndefinedMetric,
  kGeneration,
  // Tensor file parse failures.
  kBadMagic,
  kUnsupportedVersion,
  kUnsupportedDtype,
  kTruncated,
  kDimOverflow,
  kTrailingData,
  // JSON documents.
  kSchema,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ogn
