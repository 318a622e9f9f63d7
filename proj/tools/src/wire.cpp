#include "vscroll/app/wire.hpp"

#include <cmath>
#include <limits>

#include "vscroll/error.hpp"

namespace vscroll::app {
namespace {

[[noreturn]] void Reject(const FieldDescriptor& field, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, "field '" + field.name + "': " + what);
}

template <typename T>
T IntegerFrom(const FieldDescriptor& field, const Json& json) {
  if (json.is_number_integer()) {
    if (json.is_number_unsigned()) {
      const auto value = json.get<std::uint64_t>();
      if (value > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
        Reject(field, "integer out of range");
      }
      return static_cast<T>(value);
    }
    const auto value = json.get<std::int64_t>();
    if (value < std::numeric_limits<T>::min() || value > std::numeric_limits<T>::max()) {
      Reject(field, "integer out of range");
    }
    return static_cast<T>(value);
  }
  // Large int64 values travel as strings for clients without 64-bit integers.
  if (json.is_string()) {
    try {
      return std::get<T>(ParseFieldValue(field.kind, json.get<std::string>()));
    } catch (const Error& e) {
      Reject(field, e.what());
    }
  }
  Reject(field, "expected an integer");
}

}  // namespace

Json ValueToJson(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DateTime>) {
          return FormatDateTime(v);
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) return "NaN";
          if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
          return v;
        } else {
          return v;
        }
      },
      value);
}

FieldValue ValueFromJson(const FieldDescriptor& field, const Json& json) {
  switch (field.kind) {
    case FieldKind::kBit:
      if (json.is_boolean()) return json.get<bool>();
      if (json.is_number_integer() && (json == 0 || json == 1)) return json.get<int>() == 1;
      Reject(field, "expected a boolean");
    case FieldKind::kInt32:
      return IntegerFrom<std::int32_t>(field, json);
    case FieldKind::kInt64:
      return IntegerFrom<std::int64_t>(field, json);
    case FieldKind::kFloat64:
      if (json.is_number()) return json.get<double>();
      if (json == "NaN") return std::numeric_limits<double>::quiet_NaN();
      if (json == "Infinity") return std::numeric_limits<double>::infinity();
      if (json == "-Infinity") return -std::numeric_limits<double>::infinity();
      Reject(field, "expected a number");
    case FieldKind::kDateTime:
      if (!json.is_string()) Reject(field, "expected an ISO-8601 string");
      try {
        return ParseDateTime(json.get<std::string>());
      } catch (const Error& e) {
        Reject(field, e.what());
      }
    case FieldKind::kString:
      if (!json.is_string()) Reject(field, "expected a string");
      return json.get<std::string>();
  }
  Reject(field, "unsupported kind");
}

KeyTuple KeyFromJson(const KeySchema& schema, const Json& json) {
  if (!json.is_array()) throw Error(ErrorCode::kSchemaError, "keys must be a JSON array");
  if (json.size() != schema.arity()) {
    throw Error(ErrorCode::kSchemaError, "expected " + std::to_string(schema.arity()) +
                                             " key values, got " + std::to_string(json.size()));
  }
  KeyTuple key;
  key.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    key.push_back(ValueFromJson(schema.fields()[i], json[i]));
  }
  // Surfaces length and alphabet violations before the engine sees the key.
  schema.Encode(key);
  return key;
}

Json RowToJson(const IndexedTable& table, const Row& row) {
  Json key = Json::array();
  for (const FieldValue& value : row.key) key.push_back(ValueToJson(value));
  Json payload = Json::object();
  const auto& columns = table.payload_columns();
  for (std::size_t i = 0; i < row.payload.size(); ++i) {
    payload[i < columns.size() ? columns[i] : "column" + std::to_string(i + 1)] = row.payload[i];
  }
  return {{"key", std::move(key)},
          {"payload", std::move(payload)},
          {"ordinal", ToDecimal(table.schema().Encode(row.key))}};
}

Json RowsToJson(const IndexedTable& table, const std::vector<Row>& rows) {
  Json out = Json::array();
  for (const Row& row : rows) out.push_back(RowToJson(table, row));
  return out;
}

Json SchemaToJson(const KeySchema& schema) {
  Json fields = Json::array();
  for (const FieldDescriptor& field : schema.fields()) {
    Json entry = {{"name", field.name}, {"kind", FieldKindName(field.kind)}};
    if (field.kind == FieldKind::kString) {
      entry["max_length"] = field.max_length;
      entry["rules"] = field.rules->ToRuleText();
    }
    fields.push_back(std::move(entry));
  }
  return fields;
}

Json WindowToJson(const IndexedTable& table, const Window& window) {
  return {{"rows", RowsToJson(table, window.rows)},
          {"lambda", window.lambda},
          {"exact", window.exact},
          {"generation", window.generation}};
}

Json EventToJson(std::uint64_t sequence, const EngineEvent& event, const IndexedTable& table) {
  Json out = {{"seq", sequence}};
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, WindowChanged>) {
          out["type"] = "WindowChanged";
          out["rows"] = RowsToJson(table, e.rows);
          out["lambda"] = e.lambda;
          out["generation"] = e.generation;
        } else if constexpr (std::is_same_v<T, ThumbCorrected>) {
          out["type"] = "ThumbCorrected";
          out["lambda"] = e.lambda;
          out["generation"] = e.generation;
        } else {
          out["type"] = "LambdaMaxChanged";
          out["lambda_max"] = e.lambda_max;
        }
      },
      event);
  return out;
}

}  // namespace vscroll::app
