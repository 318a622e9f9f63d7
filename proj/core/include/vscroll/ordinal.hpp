#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace vscroll {

// Arbitrary-precision non-negative ordinal of a key combination.
using Ordinal = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Row ordinal: number of records above a given row.
using RowIndex = std::int64_t;

std::string ToDecimal(const Ordinal& value);

// Parses an unsigned decimal string. Throws Error(kSchemaError) on bad input.
Ordinal ParseOrdinal(std::string_view text);

Ordinal Pow(const Ordinal& base, unsigned exponent);

// Rounds a non-negative rational to the nearest integer, halves going up.
Ordinal RoundHalfUp(const Ordinal& numerator, const Ordinal& denominator);
Ordinal RoundHalfUp(const Rational& value);

}  // namespace vscroll
