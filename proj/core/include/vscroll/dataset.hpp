#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vscroll/collation.hpp"
#include "vscroll/field.hpp"
#include "vscroll/numerators.hpp"
#include "vscroll/ordinal.hpp"

namespace vscroll {

struct FieldDescriptor {
  std::string name;
  FieldKind kind = FieldKind::kInt32;
  // String fields only.
  std::uint32_t max_length = 0;
  std::shared_ptr<const CollationRules> rules;
};

// Ordered key columns of the index the grid sorts by, plus the numerator
// built from them.
class KeySchema {
 public:
  // Throws Error(kSchemaError) for an empty field list or a string field
  // without rules.
  explicit KeySchema(std::vector<FieldDescriptor> fields);

  const std::vector<FieldDescriptor>& fields() const { return fields_; }
  std::size_t arity() const { return fields_.size(); }
  const CompositeCodec& codec() const { return *codec_; }

  // Checks arity and per-field kinds. Throws Error(kSchemaError).
  void Validate(const KeyTuple& key) const;

  // Encodes a conforming key; domain errors surface as kSchemaError unless
  // they are the more specific kLengthExceeded / kUnknownChar.
  Ordinal Encode(const KeyTuple& key) const;

 private:
  std::vector<FieldDescriptor> fields_;
  std::shared_ptr<const CompositeCodec> codec_;
};

struct Row {
  KeyTuple key;
  std::vector<std::string> payload;

  friend bool operator==(const Row&, const Row&) = default;
};

enum class Direction { kAscending, kDescending };

// In-memory stand-in for an indexed DBMS table. Rows are kept in key order,
// indexed by the composite ordinal of their key, so index order and ordinal
// order coincide.
//
// Seek queries bisect the index and then read h entries. Counting queries scan
// every entry and may sleep for an injected latency, so asynchronous callers
// can be tested deterministically. Both families record how many index
// entries they touched.
class IndexedTable {
 public:
  // Sorts the rows by key. Throws Error(kIngestError) on duplicate keys and
  // Error(kSchemaError) on keys that do not conform. Error messages name rows
  // by `source_rows[i]` when given, else by 1-based position.
  IndexedTable(KeySchema schema, std::vector<Row> rows,
               std::vector<std::string> payload_columns = {},
               const std::vector<std::size_t>& source_rows = {});

  IndexedTable(const IndexedTable&) = delete;
  IndexedTable& operator=(const IndexedTable&) = delete;

  const KeySchema& schema() const { return schema_; }
  const std::vector<std::string>& payload_columns() const { return payload_columns_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Query A.
  std::optional<Row> FirstLast(Direction direction) const;
  // Query B: first h rows with key >= keys (lexicographic).
  std::vector<Row> SeekGe(const KeyTuple& keys, std::size_t h) const;
  // First h rows with key > keys.
  std::vector<Row> SeekGt(const KeyTuple& keys, std::size_t h) const;
  // Up to h rows with key < keys, nearest first.
  std::vector<Row> SeekLtDesc(const KeyTuple& keys, std::size_t h) const;

  // Query C.
  std::int64_t CountAll() const;
  // Query D.
  std::int64_t CountLess(const KeyTuple& keys) const;

  void set_slow_latency(std::chrono::milliseconds latency) { slow_latency_ = latency; }
  std::chrono::milliseconds slow_latency() const { return slow_latency_; }

  std::uint64_t touches() const { return touches_.load(std::memory_order_relaxed); }
  std::uint64_t slow_queries() const { return slow_queries_.load(std::memory_order_relaxed); }
  // Counting queries issued from the calling thread, over all tables.
  static std::uint64_t ThreadSlowQueries();

  // Direct positional access for oracles and diagnostics; not a query path.
  const Row& row_at(std::size_t index) const { return entries_[index].row; }
  const Ordinal& ordinal_at(std::size_t index) const { return entries_[index].ordinal; }

 private:
  struct Entry {
    Ordinal ordinal;
    Row row;
  };

  std::size_t LowerBound(const Ordinal& ordinal) const;
  std::size_t UpperBound(const Ordinal& ordinal) const;
  std::vector<Row> ReadForward(std::size_t start, std::size_t h) const;
  void SlowQueryPrologue() const;

  KeySchema schema_;
  std::vector<std::string> payload_columns_;
  std::vector<Entry> entries_;
  std::chrono::milliseconds slow_latency_{0};
  mutable std::atomic<std::uint64_t> touches_{0};
  mutable std::atomic<std::uint64_t> slow_queries_{0};
};

// RFC 4180 CSV with a header row. Columns named like schema fields form the
// key; all others become payload in header order. Throws Error(kIngestError)
// with the 1-based data row number for null or duplicate keys and bad values.
std::unique_ptr<IndexedTable> IngestCsv(const std::filesystem::path& path,
                                        const KeySchema& schema);

}  // namespace vscroll
