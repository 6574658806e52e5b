#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace favfa {

/// Machine-readable failure categories shared by every module.
enum class ErrorCode {
  kParseError,
  kIoError,
  kSchemaInvalid,
  kMissingAttribute,
  kUnresolvedImage,
  kDegeneratePairs,
  kNoGroups,
  kDegenerateSupport,
  kEmptySubset,
  kConstantColumn,
  kQuasiSeparation,
  kSingularInformation,
  kNotConverged,
  kRankDeficient,
  kInsufficientCandidates,
  kNotDivisible,
  kInsufficientStyles,
  kPreconditionViolation,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying an ErrorCode. All library failures are reported
/// through this type so callers can map them to exit codes or JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace favfa
