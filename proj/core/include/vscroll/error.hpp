#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vscroll {

enum class ErrorCode {
  kMalformedRule,
  kDuplicateChar,
  kUnknownChar,
  kNoSuchSlot,
  kLengthExceeded,
  kOutOfRange,
  kSchemaError,
  kIngestError,
  kEmptyDomain,
  kRangeError,
  kStaleEndpointConflict,
  kEmptyTable,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception; callers that need
// to branch on the failure kind inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vscroll
