#pragma once

#include <cstdint>
#include <json.hpp>

#include "vscroll/dataset.hpp"
#include "vscroll/engine.hpp"
#include "vscroll/events.hpp"

namespace vscroll::app {

using Json = nlohmann::json;

// JSON encoding shared by the service and its clients. Datetimes are ISO-8601
// strings, doubles are numbers (non-finite ones are the strings "NaN",
// "Infinity", "-Infinity"), ordinals are decimal strings.
Json ValueToJson(const FieldValue& value);

// Throws Error(kSchemaError) when the JSON does not fit the field.
FieldValue ValueFromJson(const FieldDescriptor& field, const Json& json);

// Array of values in schema order; validated and encodable on return.
// Throws Error(kSchemaError), Error(kLengthExceeded) or Error(kUnknownChar).
KeyTuple KeyFromJson(const KeySchema& schema, const Json& json);

// {"key": [...], "payload": {"column": "text", ...}, "ordinal": "123"}
Json RowToJson(const IndexedTable& table, const Row& row);
Json RowsToJson(const IndexedTable& table, const std::vector<Row>& rows);

Json SchemaToJson(const KeySchema& schema);

Json WindowToJson(const IndexedTable& table, const Window& window);

// One event-stream line: {"seq": n, "type": "...", ...}.
Json EventToJson(std::uint64_t sequence, const EngineEvent& event, const IndexedTable& table);

}  // namespace vscroll::app
