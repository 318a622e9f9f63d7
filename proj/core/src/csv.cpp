#include "vscroll/csv.hpp"

#include "vscroll/error.hpp"

namespace vscroll::csv {

void ReadRecords(std::istream& in,
                 const std::function<void(std::size_t, std::vector<Field>&)>& on_record) {
  std::vector<Field> record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  bool field_started = false;
  bool after_quote = false;
  std::size_t record_number = 0;

  const auto end_field = [&] {
    record.push_back(Field{std::move(field), quoted});
    field.clear();
    quoted = false;
    field_started = false;
    after_quote = false;
  };
  const auto end_record = [&] {
    end_field();
    ++record_number;
    on_record(record_number, record);
    record.clear();
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case ',':
        end_field();
        field_started = true;  // a separator always implies another field
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        [[fallthrough]];
      case '\n':
        end_record();
        break;
      case '"':
        if (!field.empty() || after_quote) {
          throw Error(ErrorCode::kIngestError,
                      "stray quote in record " + std::to_string(record_number + 1));
        }
        in_quotes = true;
        quoted = true;
        field_started = true;
        break;
      default:
        if (after_quote) {
          throw Error(ErrorCode::kIngestError, "text after closing quote in record " +
                                                   std::to_string(record_number + 1));
        }
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kIngestError,
                "unterminated quote in record " + std::to_string(record_number + 1));
  }
  if (field_started || !field.empty() || !record.empty() || after_quote) end_record();
}

std::string EscapeField(std::string_view field) {
  if (!field.empty() && field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteRecord(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out << ',';
    out << EscapeField(fields[i]);
  }
  out << '\n';
}

}  // namespace vscroll::csv
