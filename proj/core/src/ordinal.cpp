#include "vscroll/ordinal.hpp"

#include "vscroll/error.hpp"

namespace vscroll {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRule: return "MalformedRule";
    case ErrorCode::kDuplicateChar: return "DuplicateChar";
    case ErrorCode::kUnknownChar: return "UnknownChar";
    case ErrorCode::kNoSuchSlot: return "NoSuchSlot";
    case ErrorCode::kLengthExceeded: return "LengthExceeded";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kIngestError: return "IngestError";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kRangeError: return "RangeError";
    case ErrorCode::kStaleEndpointConflict: return "StaleEndpointConflict";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::string ToDecimal(const Ordinal& value) { return value.str(); }

Ordinal ParseOrdinal(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::kSchemaError, "empty ordinal");
  }
  Ordinal result = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kSchemaError,
                  "ordinal must be a decimal string: '" + std::string(text) + "'");
    }
    result *= 10;
    result += c - '0';
  }
  return result;
}

Ordinal Pow(const Ordinal& base, unsigned exponent) {
  Ordinal result = 1;
  Ordinal b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent != 0) b *= b;
  }
  return result;
}

Ordinal RoundHalfUp(const Ordinal& numerator, const Ordinal& denominator) {
  // floor((2n + d) / 2d), valid for n >= 0, d > 0
  return (2 * numerator + denominator) / (2 * denominator);
}

Ordinal RoundHalfUp(const Rational& value) {
  return RoundHalfUp(boost::multiprecision::numerator(value),
                     boost::multiprecision::denominator(value));
}

}  // namespace vscroll
