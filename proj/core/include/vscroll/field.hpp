#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vscroll {

enum class FieldKind { kBit, kInt32, kInt64, kFloat64, kDateTime, kString };

std::string_view FieldKindName(FieldKind kind);
// Accepts the names returned by FieldKindName. Throws Error(kSchemaError).
FieldKind ParseFieldKind(std::string_view name);

// Milliseconds since 1970-01-01T00:00:00Z.
struct DateTime {
  std::int64_t millis = 0;
  friend auto operator<=>(const DateTime&, const DateTime&) = default;
};

// Strings are stored as UTF-8.
using FieldValue = std::variant<bool, std::int32_t, std::int64_t, double, DateTime, std::string>;
using KeyTuple = std::vector<FieldValue>;

FieldKind KindOf(const FieldValue& value);

// ISO-8601 with millisecond precision and a trailing Z, e.g.
// 2016-03-01T12:00:00.250Z. Years outside 0000..9999 get a sign and more digits.
std::string FormatDateTime(DateTime value);
// Accepts YYYY-MM-DD, optionally followed by [T ]HH:MM[:SS[.fff]] and Z.
DateTime ParseDateTime(std::string_view text);

// Text conversion used by CSV ingestion and the wire format.
FieldValue ParseFieldValue(FieldKind kind, std::string_view text);
std::string FormatFieldValue(const FieldValue& value);

}  // namespace vscroll
