#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace vscroll::csv {

struct Field {
  std::string text;
  // Distinguishes a quoted empty string from an empty (NULL) cell.
  bool quoted = false;
};

// Streams RFC 4180 records: comma separated, fields optionally quoted with
// doubled quotes inside, CRLF or LF record ends. The callback receives the
// 1-based record number. Throws Error(kIngestError) on an unterminated quote.
void ReadRecords(std::istream& in,
                 const std::function<void(std::size_t, std::vector<Field>&)>& on_record);

// Quotes the field when it is empty or contains a comma, quote, CR or LF, so
// an empty string never reads back as a NULL cell.
std::string EscapeField(std::string_view field);

void WriteRecord(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace vscroll::csv
