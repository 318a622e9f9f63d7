#include "vscroll/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "vscroll/csv.hpp"
#include "vscroll/error.hpp"

namespace vscroll {

namespace {

std::vector<ScalarCodec> BuildCodecs(const std::vector<FieldDescriptor>& fields) {
  std::vector<ScalarCodec> codecs;
  codecs.reserve(fields.size());
  for (const FieldDescriptor& field : fields) {
    switch (field.kind) {
      case FieldKind::kBit: codecs.push_back(ScalarCodec::Bit()); break;
      case FieldKind::kInt32: codecs.push_back(ScalarCodec::Int32()); break;
      case FieldKind::kInt64: codecs.push_back(ScalarCodec::Int64()); break;
      case FieldKind::kFloat64: codecs.push_back(ScalarCodec::Float64()); break;
      case FieldKind::kDateTime: codecs.push_back(ScalarCodec::DateTimeMillis()); break;
      case FieldKind::kString:
        if (field.rules == nullptr) {
          throw Error(ErrorCode::kSchemaError,
                      "string field '" + field.name + "' needs collation rules");
        }
        codecs.push_back(ScalarCodec::String(field.rules, field.max_length));
        break;
    }
  }
  return codecs;
}

}  // namespace

KeySchema::KeySchema(std::vector<FieldDescriptor> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) {
    throw Error(ErrorCode::kSchemaError, "key schema needs at least one field");
  }
  codec_ = std::make_shared<const CompositeCodec>(BuildCodecs(fields_));
}

void KeySchema::Validate(const KeyTuple& key) const {
  if (key.size() != fields_.size()) {
    throw Error(ErrorCode::kSchemaError, "expected " + std::to_string(fields_.size()) +
                                             " key values, got " + std::to_string(key.size()));
  }
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (KindOf(key[i]) != fields_[i].kind) {
      throw Error(ErrorCode::kSchemaError,
                  "field '" + fields_[i].name + "' expects " +
                      std::string(FieldKindName(fields_[i].kind)) + ", got " +
                      std::string(FieldKindName(KindOf(key[i]))));
    }
  }
}

Ordinal KeySchema::Encode(const KeyTuple& key) const {
  Validate(key);
  return codec_->Encode(key);
}

// ---------------------------------------------------------------------------

IndexedTable::IndexedTable(KeySchema schema, std::vector<Row> rows,
                           std::vector<std::string> payload_columns,
                           const std::vector<std::size_t>& source_rows)
    : schema_(std::move(schema)), payload_columns_(std::move(payload_columns)) {
  const auto row_label = [&](std::size_t i) {
    return "row " + std::to_string(i < source_rows.size() ? source_rows[i] : i + 1);
  };
  std::vector<std::pair<Ordinal, std::size_t>> order;
  order.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      order.emplace_back(schema_.Encode(rows[i].key), i);
    } catch (const Error& e) {
      throw Error(e.code(), row_label(i) + ": " + e.what());
    }
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i - 1].first == order[i].first) {
      const std::size_t first = std::min(order[i - 1].second, order[i].second);
      const std::size_t second = std::max(order[i - 1].second, order[i].second);
      throw Error(ErrorCode::kIngestError, row_label(second) +
                                               ": duplicate key (first seen at " +
                                               row_label(first) + ")");
    }
  }
  entries_.reserve(order.size());
  for (auto& [ordinal, index] : order) {
    entries_.push_back(Entry{std::move(ordinal), std::move(rows[index])});
  }
}

std::size_t IndexedTable::LowerBound(const Ordinal& ordinal) const {
  std::size_t lo = 0;
  std::size_t hi = entries_.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (entries_[mid].ordinal < ordinal) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  touches_.fetch_add(probes, std::memory_order_relaxed);
  return lo;
}

std::size_t IndexedTable::UpperBound(const Ordinal& ordinal) const {
  std::size_t lo = 0;
  std::size_t hi = entries_.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (entries_[mid].ordinal <= ordinal) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  touches_.fetch_add(probes, std::memory_order_relaxed);
  return lo;
}

std::vector<Row> IndexedTable::ReadForward(std::size_t start, std::size_t h) const {
  const std::size_t end = std::min(entries_.size(), start + h);
  std::vector<Row> out;
  if (start >= end) return out;
  out.reserve(end - start);
  for (std::size_t i = start; i < end; ++i) out.push_back(entries_[i].row);
  touches_.fetch_add(end - start, std::memory_order_relaxed);
  return out;
}

std::optional<Row> IndexedTable::FirstLast(Direction direction) const {
  if (entries_.empty()) return std::nullopt;
  touches_.fetch_add(1, std::memory_order_relaxed);
  return direction == Direction::kAscending ? entries_.front().row : entries_.back().row;
}

std::vector<Row> IndexedTable::SeekGe(const KeyTuple& keys, std::size_t h) const {
  return ReadForward(LowerBound(schema_.Encode(keys)), h);
}

std::vector<Row> IndexedTable::SeekGt(const KeyTuple& keys, std::size_t h) const {
  return ReadForward(UpperBound(schema_.Encode(keys)), h);
}

std::vector<Row> IndexedTable::SeekLtDesc(const KeyTuple& keys, std::size_t h) const {
  std::size_t index = LowerBound(schema_.Encode(keys));
  std::vector<Row> out;
  while (index > 0 && out.size() < h) {
    --index;
    out.push_back(entries_[index].row);
  }
  touches_.fetch_add(out.size(), std::memory_order_relaxed);
  return out;
}

namespace {
thread_local std::uint64_t thread_slow_queries = 0;
}  // namespace

std::uint64_t IndexedTable::ThreadSlowQueries() { return thread_slow_queries; }

void IndexedTable::SlowQueryPrologue() const {
  slow_queries_.fetch_add(1, std::memory_order_relaxed);
  ++thread_slow_queries;
  if (slow_latency_.count() > 0) std::this_thread::sleep_for(slow_latency_);
}

std::int64_t IndexedTable::CountAll() const {
  SlowQueryPrologue();
  std::int64_t count = 0;
  for (const Entry& entry : entries_) {
    (void)entry;
    ++count;
  }
  touches_.fetch_add(entries_.size(), std::memory_order_relaxed);
  return count;
}

std::int64_t IndexedTable::CountLess(const KeyTuple& keys) const {
  const Ordinal ordinal = schema_.Encode(keys);
  SlowQueryPrologue();
  // A full scan, the way a DBMS without an order-statistics index counts.
  std::int64_t count = 0;
  for (const Entry& entry : entries_) {
    if (entry.ordinal < ordinal) ++count;
  }
  touches_.fetch_add(entries_.size(), std::memory_order_relaxed);
  return count;
}

// ---------------------------------------------------------------------------

std::unique_ptr<IndexedTable> IngestCsv(const std::filesystem::path& path,
                                        const KeySchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIngestError, "cannot open " + path.string());
  }

  std::vector<int> key_column(schema.arity(), -1);
  std::vector<std::size_t> payload_index;
  std::vector<std::string> payload_names;
  std::vector<Row> rows;
  std::vector<std::size_t> source_row;
  std::size_t header_width = 0;

  csv::ReadRecords(in, [&](std::size_t record, std::vector<csv::Field>& fields) {
    if (record == 1) {
      header_width = fields.size();
      std::unordered_map<std::string, std::size_t> by_name;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!by_name.emplace(fields[i].text, i).second) {
          throw Error(ErrorCode::kIngestError, "duplicate header column '" + fields[i].text + "'");
        }
      }
      for (std::size_t f = 0; f < schema.arity(); ++f) {
        auto it = by_name.find(schema.fields()[f].name);
        if (it == by_name.end()) {
          throw Error(ErrorCode::kIngestError,
                      "header lacks key column '" + schema.fields()[f].name + "'");
        }
        key_column[f] = static_cast<int>(it->second);
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (std::find(key_column.begin(), key_column.end(), static_cast<int>(i)) ==
            key_column.end()) {
          payload_index.push_back(i);
          payload_names.push_back(fields[i].text);
        }
      }
      return;
    }
    const std::size_t data_row = record - 1;
    if (fields.size() == 1 && fields[0].text.empty() && !fields[0].quoted) return;
    if (fields.size() != header_width) {
      throw Error(ErrorCode::kIngestError, "row " + std::to_string(data_row) + " has " +
                                               std::to_string(fields.size()) + " cells, header has " +
                                               std::to_string(header_width));
    }
    Row row;
    row.key.reserve(schema.arity());
    for (std::size_t f = 0; f < schema.arity(); ++f) {
      csv::Field& cell = fields[static_cast<std::size_t>(key_column[f])];
      if (cell.text.empty() && !cell.quoted) {
        throw Error(ErrorCode::kIngestError, "row " + std::to_string(data_row) +
                                                 ": NULL in key column '" +
                                                 schema.fields()[f].name + "'");
      }
      try {
        row.key.push_back(ParseFieldValue(schema.fields()[f].kind, cell.text));
      } catch (const Error& e) {
        throw Error(ErrorCode::kIngestError, "row " + std::to_string(data_row) + ": " + e.what());
      }
    }
    for (std::size_t i : payload_index) row.payload.push_back(std::move(fields[i].text));
    rows.push_back(std::move(row));
    source_row.push_back(data_row);
  });

  if (header_width == 0) {
    throw Error(ErrorCode::kIngestError, path.string() + " has no header row");
  }

  try {
    return std::make_unique<IndexedTable>(schema, std::move(rows), std::move(payload_names),
                                          source_row);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIngestError) throw;
    throw Error(ErrorCode::kIngestError, e.what());
  }
}

}  // namespace vscroll
