#include "vscroll/field.hpp"

#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "vscroll/utf8.hpp"

namespace vscroll {
namespace {

TEST(DateTime, FormatsIsoWithMillis) {
  EXPECT_EQ(FormatDateTime(DateTime{0}), "1970-01-01T00:00:00.000Z");
  EXPECT_EQ(FormatDateTime(DateTime{1456833600250}), "2016-03-01T12:00:00.250Z");
  EXPECT_EQ(FormatDateTime(DateTime{-1}), "1969-12-31T23:59:59.999Z");
}

TEST(DateTime, ParsesVariants) {
  EXPECT_EQ(ParseDateTime("2016-03-01").millis, 1456790400000);
  EXPECT_EQ(ParseDateTime("2016-03-01T12:00").millis, 1456833600000);
  EXPECT_EQ(ParseDateTime("2016-03-01 12:00:00.25Z").millis, 1456833600250);
  EXPECT_EQ(ParseDateTime("2016-02-29").millis, 1456704000000);
  EXPECT_VSCROLL_ERROR(ParseDateTime("2016-02-30"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(ParseDateTime("2015-02-29"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(ParseDateTime("2016-03-01T25:00"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(ParseDateTime("yesterday"), ErrorCode::kSchemaError);
}

TEST(DateTime, RoundTripsAcrossTheWholeRange) {
  std::mt19937_64 rng(11);
  // Keep within years representable by the formatter's civil-date arithmetic.
  std::uniform_int_distribution<std::int64_t> millis(-9'000'000'000'000'000LL,
                                                     9'000'000'000'000'000LL);
  for (int i = 0; i < 20000; ++i) {
    const DateTime value{millis(rng)};
    EXPECT_EQ(ParseDateTime(FormatDateTime(value)).millis, value.millis)
        << FormatDateTime(value);
  }
}

TEST(FieldValue, TextRoundTrip) {
  EXPECT_EQ(std::get<std::int32_t>(ParseFieldValue(FieldKind::kInt32, "-42")), -42);
  EXPECT_EQ(std::get<bool>(ParseFieldValue(FieldKind::kBit, "1")), true);
  EXPECT_EQ(std::get<double>(ParseFieldValue(FieldKind::kFloat64, "0.1")), 0.1);
  EXPECT_EQ(FormatFieldValue(0.1), "0.1");
  EXPECT_EQ(FormatFieldValue(std::int64_t{-9}), "-9");
  EXPECT_EQ(FormatFieldValue(true), "true");
  EXPECT_EQ(FormatDateTime(DateTime{-62198755200000}), "-0001-01-01T00:00:00.000Z");
  EXPECT_TRUE(std::get<bool>(ParseFieldValue(FieldKind::kBit, FormatFieldValue(true))));
  EXPECT_VSCROLL_ERROR(ParseFieldValue(FieldKind::kInt32, "2147483648"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(ParseFieldValue(FieldKind::kInt64, "12x"), ErrorCode::kSchemaError);
  EXPECT_EQ(ParseFieldKind("datetime"), FieldKind::kDateTime);
  EXPECT_VSCROLL_ERROR(ParseFieldKind("decimal"), ErrorCode::kSchemaError);
}

TEST(Utf8, DecodeEncode) {
  EXPECT_EQ(utf8::Decode("аБ€😀"), U"аБ€😀");
  EXPECT_EQ(utf8::Encode(U"аБ€😀"), "аБ€😀");
  EXPECT_VSCROLL_ERROR(utf8::Decode("\xd0"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(utf8::Decode("\xc0\x80"), ErrorCode::kSchemaError);
  EXPECT_VSCROLL_ERROR(utf8::Decode("\xed\xa0\x80"), ErrorCode::kSchemaError);
}

}  // namespace
}  // namespace vscroll
