#include "vscroll/app/wire.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "expect_error.hpp"

namespace vscroll::app {
namespace {

using E = ErrorCode;

std::shared_ptr<const CollationRules> Rules() {
  static const auto rules = std::make_shared<CollationRules>(CollationRules::Parse("<а,А<б,Б;в,В"));
  return rules;
}

KeySchema MixedSchema() {
  return KeySchema({{"b", FieldKind::kBit, 0, nullptr},
                    {"i", FieldKind::kInt32, 0, nullptr},
                    {"l", FieldKind::kInt64, 0, nullptr},
                    {"d", FieldKind::kFloat64, 0, nullptr},
                    {"t", FieldKind::kDateTime, 0, nullptr},
                    {"s", FieldKind::kString, 3, Rules()}});
}

TEST(Wire, ValuesRoundTripThroughJsonText) {
  const KeySchema schema = MixedSchema();
  const KeyTuple key{true, std::int32_t{-7}, std::int64_t{-9'007'199'254'740'993}, 0.1,
                     DateTime{1456833600250}, std::string("бА")};
  Json array = Json::array();
  for (const FieldValue& value : key) array.push_back(ValueToJson(value));
  const std::string text = array.dump();
  EXPECT_NE(text.find("\"2016-03-01T12:00:00.250Z\""), std::string::npos) << text;
  EXPECT_NE(text.find("0.1"), std::string::npos) << text;
  EXPECT_EQ(KeyFromJson(schema, Json::parse(text)), key);
}

TEST(Wire, DoublesKeepEveryBit) {
  const FieldDescriptor field{"d", FieldKind::kFloat64, 0, nullptr};
  for (double value : {1.0 / 3.0, -0.0, 5e-324, std::numeric_limits<double>::max(),
                       std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()}) {
    const Json back = Json::parse(ValueToJson(value).dump());
    const double decoded = std::get<double>(ValueFromJson(field, back));
    EXPECT_EQ(std::signbit(decoded), std::signbit(value));
    EXPECT_EQ(decoded, value);
  }
  EXPECT_TRUE(std::isnan(std::get<double>(
      ValueFromJson(field, ValueToJson(std::numeric_limits<double>::quiet_NaN())))));
}

TEST(Wire, AcceptsAlternativeSpellings) {
  const FieldDescriptor bit{"b", FieldKind::kBit, 0, nullptr};
  const FieldDescriptor i64{"l", FieldKind::kInt64, 0, nullptr};
  EXPECT_EQ(std::get<bool>(ValueFromJson(bit, 1)), true);
  EXPECT_EQ(std::get<std::int64_t>(ValueFromJson(i64, "9223372036854775807")),
            std::numeric_limits<std::int64_t>::max());
}

TEST(Wire, RejectsMisfitKeys) {
  const KeySchema schema = MixedSchema();
  const Json good = Json::parse(R"([false, 1, 2, 3.5, "2020-01-01", "а"])");
  EXPECT_NO_THROW(KeyFromJson(schema, good));

  const auto with = [&](std::size_t i, const Json& value) {
    Json key = good;
    key[i] = value;
    return key;
  };
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, Json::object()), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, Json::array({1, 2})), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(0, 2)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(1, 2147483648LL)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(1, 1.5)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(1, "x")), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(2, 18446744073709551615ULL)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(3, "fast")), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(4, 0)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(4, "2020-13-01")), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(5, nullptr)), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(5, "аааа")), E::kLengthExceeded);
  EXPECT_VSCROLL_ERROR(KeyFromJson(schema, with(5, "z")), E::kUnknownChar);
}

TEST(Wire, RowsCarryDecimalOrdinals) {
  const KeySchema schema({{"k", FieldKind::kInt64, 0, nullptr}});
  IndexedTable table(schema, {{{std::int64_t{5}}, {"five"}}}, {"name"});
  const Json row = RowToJson(table, table.row_at(0));
  EXPECT_EQ(row["key"], Json::array({5}));
  EXPECT_EQ(row["payload"], Json({{"name", "five"}}));
  // int64 5 encodes as 5 + 2^63, beyond what a JSON double holds exactly.
  EXPECT_EQ(row["ordinal"], "9223372036854775813");
}

TEST(Wire, EventsAndSchema) {
  const KeySchema schema({{"k", FieldKind::kInt32, 0, nullptr},
                          {"s", FieldKind::kString, 2, Rules()}});
  IndexedTable table(schema, {{{std::int32_t{1}, std::string("а")}, {}}});
  EXPECT_EQ(EventToJson(3, ThumbCorrected{17, 4}, table),
            Json({{"seq", 3}, {"type", "ThumbCorrected"}, {"lambda", 17}, {"generation", 4}}));
  EXPECT_EQ(EventToJson(1, LambdaMaxChanged{99}, table),
            Json({{"seq", 1}, {"type", "LambdaMaxChanged"}, {"lambda_max", 99}}));
  const Json changed = EventToJson(2, WindowChanged{{table.row_at(0)}, 0, 1}, table);
  EXPECT_EQ(changed["type"], "WindowChanged");
  EXPECT_EQ(changed["rows"][0]["key"], Json::parse(R"([1, "а"])"));

  const Json fields = SchemaToJson(schema);
  EXPECT_EQ(fields[0], Json({{"name", "k"}, {"kind", "int32"}}));
  EXPECT_EQ(fields[1]["max_length"], 2);
  EXPECT_EQ(fields[1]["rules"], Rules()->ToRuleText());
}

}  // namespace
}  // namespace vscroll::app
