#include "vscroll/sql.hpp"

#include <charconv>
#include <cmath>

#include "vscroll/error.hpp"

namespace vscroll::sql {

namespace {

std::string OrderBy(const KeySchema& schema, bool descending) {
  std::string out = " ORDER BY ";
  for (std::size_t i = 0; i < schema.arity(); ++i) {
    if (i != 0) out += ", ";
    out += Identifier(schema.fields()[i].name);
    if (descending) out += " DESC";
  }
  return out;
}

std::string Nested(const KeySchema& schema, const KeyTuple& keys, std::size_t i, bool strict,
                   bool descending) {
  const std::string column = Identifier(schema.fields()[i].name);
  const std::string literal = Literal(keys[i]);
  const char* inclusive = descending ? " <= " : " >= ";
  const char* exclusive = descending ? " < " : " > ";
  if (i + 1 == schema.arity()) {
    return column + (strict ? exclusive : inclusive) + literal;
  }
  return column + inclusive + literal + " AND (" + column + exclusive + literal + " OR (" +
         Nested(schema, keys, i + 1, strict, descending) + "))";
}

}  // namespace

std::string Literal(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "TRUE" : "FALSE";
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) return "CAST('NaN' AS DOUBLE PRECISION)";
          if (std::isinf(v)) {
            return v > 0 ? "CAST('Infinity' AS DOUBLE PRECISION)"
                         : "CAST('-Infinity' AS DOUBLE PRECISION)";
          }
          char buf[32];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
          return std::string(buf, ptr);
        } else if constexpr (std::is_same_v<T, DateTime>) {
          std::string iso = FormatDateTime(v);
          // YYYY-MM-DDTHH:MM:SS.fffZ -> YYYY-MM-DD HH:MM:SS.fff
          if (auto t = iso.find('T'); t != std::string::npos) iso[t] = ' ';
          if (!iso.empty() && iso.back() == 'Z') iso.pop_back();
          return "TIMESTAMP '" + iso + "'";
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string out = "'";
          for (char c : v) {
            if (c == '\'') out.push_back('\'');
            out.push_back(c);
          }
          out.push_back('\'');
          return out;
        } else {
          return std::to_string(v);
        }
      },
      value);
}

std::string Identifier(std::string_view name) {
  bool plain = !name.empty() && !(name[0] >= '0' && name[0] <= '9');
  for (char c : name) {
    const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_';
    plain = plain && word;
  }
  if (plain) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string RenderWhere(const KeySchema& schema, const KeyTuple& keys, bool strict,
                        bool descending) {
  schema.Validate(keys);
  return Nested(schema, keys, 0, strict, descending);
}

std::string RenderFirstLast(std::string_view table, const KeySchema& schema,
                            Direction direction) {
  return "SELECT * FROM " + Identifier(table) +
         OrderBy(schema, direction == Direction::kDescending) + " LIMIT 1";
}

std::string RenderSeek(std::string_view table, const KeySchema& schema, const KeyTuple& keys,
                       std::size_t h, bool strict, bool descending) {
  return "SELECT * FROM " + Identifier(table) + " WHERE " +
         RenderWhere(schema, keys, strict, descending) + OrderBy(schema, descending) +
         " LIMIT " + std::to_string(h);
}

std::string RenderCountAll(std::string_view table) {
  return "SELECT COUNT(*) FROM " + Identifier(table);
}

std::string RenderCountLess(std::string_view table, const KeySchema& schema,
                            const KeyTuple& keys) {
  return "SELECT COUNT(*) FROM " + Identifier(table) + " WHERE " +
         RenderWhere(schema, keys, /*strict=*/true, /*descending=*/true);
}

}  // namespace vscroll::sql
