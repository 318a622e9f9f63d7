#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "vscroll/dataset.hpp"

namespace vscroll::sql {

// Standard SQL literal for a key value: quoted strings with doubled quotes,
// TRUE/FALSE, TIMESTAMP '...' for datetimes, round-trip doubles.
std::string Literal(const FieldValue& value);

// Identifier as-is when it is a plain word, double-quoted otherwise.
std::string Identifier(std::string_view name);

// Lexicographic "key >= K" over the schema columns written in the nested
// form that keeps OR away from the top level:
//
//   k1 >= 5 AND (k1 > 5 OR (k2 >= 7))
//
// `strict` turns the innermost comparison into `>`, `descending` flips every
// comparison (for "key < K ORDER BY key DESC" walks, use strict+descending).
// Throws Error(kSchemaError) when keys do not conform.
std::string RenderWhere(const KeySchema& schema, const KeyTuple& keys, bool strict,
                        bool descending);

// Full statements for the four query shapes a live DBMS adapter issues.
std::string RenderFirstLast(std::string_view table, const KeySchema& schema,
                            Direction direction);
std::string RenderSeek(std::string_view table, const KeySchema& schema, const KeyTuple& keys,
                       std::size_t h, bool strict, bool descending);
std::string RenderCountAll(std::string_view table);
std::string RenderCountLess(std::string_view table, const KeySchema& schema,
                            const KeyTuple& keys);

}  // namespace vscroll::sql
