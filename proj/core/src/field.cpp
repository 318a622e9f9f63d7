#include "vscroll/field.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vscroll/error.hpp"

namespace vscroll {

namespace {

constexpr std::int64_t kMillisPerDay = 86'400'000;

// Proleptic Gregorian calendar conversions on 64-bit day counts.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void CivilFromDays(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

unsigned DaysInMonth(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

[[noreturn]] void BadValue(std::string_view what, std::string_view text) {
  throw Error(ErrorCode::kSchemaError,
              "invalid " + std::string(what) + " value '" + std::string(text) + "'");
}

template <typename T>
T ParseInteger(std::string_view text, std::string_view what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) BadValue(what, text);
  return value;
}

unsigned ParseDigits(std::string_view text, std::size_t& pos, std::size_t count,
                     std::string_view whole) {
  if (pos + count > text.size()) BadValue("datetime", whole);
  unsigned value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') BadValue("datetime", whole);
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  pos += count;
  return value;
}

}  // namespace

std::string_view FieldKindName(FieldKind kind) {
  switch (kind) {
    case FieldKind::kBit: return "bit";
    case FieldKind::kInt32: return "int32";
    case FieldKind::kInt64: return "int64";
    case FieldKind::kFloat64: return "float64";
    case FieldKind::kDateTime: return "datetime";
    case FieldKind::kString: return "string";
  }
  return "unknown";
}

FieldKind ParseFieldKind(std::string_view name) {
  for (FieldKind kind : {FieldKind::kBit, FieldKind::kInt32, FieldKind::kInt64,
                         FieldKind::kFloat64, FieldKind::kDateTime, FieldKind::kString}) {
    if (FieldKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kSchemaError, "unknown field kind '" + std::string(name) + "'");
}

FieldKind KindOf(const FieldValue& value) {
  return static_cast<FieldKind>(value.index());
}

std::string FormatDateTime(DateTime value) {
  const std::int64_t days = FloorDiv(value.millis, kMillisPerDay);
  const std::int64_t in_day = value.millis - days * kMillisPerDay;
  std::int64_t y = 0;
  unsigned m = 0;
  unsigned d = 0;
  CivilFromDays(days, y, m, d);
  const auto ms = static_cast<unsigned>(in_day % 1000);
  const auto secs = static_cast<unsigned>(in_day / 1000);
  char buf[64];
  if (y >= 0 && y <= 9999) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02u:%02u:%02u.%03uZ",
                  static_cast<long long>(y), m, d, secs / 3600, secs / 60 % 60,
                  secs % 60, ms);
  } else {
    std::snprintf(buf, sizeof buf, "%+05lld-%02u-%02uT%02u:%02u:%02u.%03uZ",
                  static_cast<long long>(y), m, d, secs / 3600, secs / 60 % 60,
                  secs % 60, ms);
  }
  return buf;
}

DateTime ParseDateTime(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  bool explicit_sign = false;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    negative = text[0] == '-';
    explicit_sign = true;
    ++pos;
  }
  const std::size_t year_start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  const std::size_t year_len = pos - year_start;
  if (year_len < 4 || (!explicit_sign && year_len != 4) || year_len > 12) {
    BadValue("datetime", text);
  }
  std::int64_t year = 0;
  for (std::size_t i = year_start; i < pos; ++i) year = year * 10 + (text[i] - '0');
  if (negative) year = -year;

  const auto expect = [&](char c) {
    if (pos >= text.size() || text[pos] != c) BadValue("datetime", text);
    ++pos;
  };
  expect('-');
  const unsigned month = ParseDigits(text, pos, 2, text);
  expect('-');
  const unsigned day = ParseDigits(text, pos, 2, text);
  if (month < 1 || month > 12 || day < 1 || day > DaysInMonth(year, month)) {
    BadValue("datetime", text);
  }

  unsigned hour = 0, minute = 0, second = 0, millis = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    hour = ParseDigits(text, pos, 2, text);
    expect(':');
    minute = ParseDigits(text, pos, 2, text);
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      second = ParseDigits(text, pos, 2, text);
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t frac_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        const std::size_t frac_len = pos - frac_start;
        if (frac_len == 0 || frac_len > 3) BadValue("datetime", text);
        std::size_t p = frac_start;
        millis = ParseDigits(text, p, frac_len, text);
        for (std::size_t i = frac_len; i < 3; ++i) millis *= 10;
      }
    }
    if (hour > 23 || minute > 59 || second > 59) BadValue("datetime", text);
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) BadValue("datetime", text);

  const std::int64_t days = DaysFromCivil(year, month, day);
  const std::int64_t in_day =
      ((static_cast<std::int64_t>(hour) * 60 + minute) * 60 + second) * 1000 + millis;
  std::int64_t total;
  if (__builtin_mul_overflow(days, kMillisPerDay, &total) ||
      __builtin_add_overflow(total, in_day, &total)) {
    BadValue("datetime", text);
  }
  return DateTime{total};
}

FieldValue ParseFieldValue(FieldKind kind, std::string_view text) {
  switch (kind) {
    case FieldKind::kBit:
      if (text == "1" || text == "true" || text == "TRUE" || text == "t") return true;
      if (text == "0" || text == "false" || text == "FALSE" || text == "f") return false;
      BadValue("bit", text);
    case FieldKind::kInt32:
      return ParseInteger<std::int32_t>(text, "int32");
    case FieldKind::kInt64:
      return ParseInteger<std::int64_t>(text, "int64");
    case FieldKind::kFloat64: {
      if (text.empty()) BadValue("float64", text);
      // strtod handles inf/nan spellings that from_chars on this toolchain also
      // accepts; use it for portability of the hex and special forms.
      std::string copy(text);
      char* end = nullptr;
      const double value = std::strtod(copy.c_str(), &end);
      if (end != copy.c_str() + copy.size()) BadValue("float64", text);
      return value;
    }
    case FieldKind::kDateTime:
      return ParseDateTime(text);
    case FieldKind::kString:
      return std::string(text);
  }
  BadValue("field", text);
}

std::string FormatFieldValue(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[32];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
          return std::string(buf, ptr);
        } else if constexpr (std::is_same_v<T, DateTime>) {
          return FormatDateTime(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      value);
}

}  // namespace vscroll
