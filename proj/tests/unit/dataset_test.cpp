#include "vscroll/dataset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "expect_error.hpp"
#include "sql_eval.hpp"
#include "temp_dir.hpp"
#include "vscroll/csv.hpp"
#include "vscroll/sql.hpp"

namespace vscroll {
namespace {

using E = ErrorCode;

KeySchema IntSchema(std::size_t arity) {
  std::vector<FieldDescriptor> fields;
  for (std::size_t i = 0; i < arity; ++i) {
    fields.push_back({"k" + std::to_string(i + 1), FieldKind::kInt32, 0, nullptr});
  }
  return KeySchema(std::move(fields));
}

KeyTuple Ints(std::initializer_list<std::int32_t> values) {
  KeyTuple out;
  for (auto v : values) out.emplace_back(v);
  return out;
}

// Random table of distinct two-field keys over a small grid so that probes
// hit both present and absent keys.
std::vector<Row> RandomRows(std::mt19937_64& rng, std::size_t n, std::int32_t range) {
  std::set<std::pair<std::int32_t, std::int32_t>> keys;
  std::uniform_int_distribution<std::int32_t> pick(-range, range);
  while (keys.size() < n) keys.insert({pick(rng), pick(rng)});
  std::vector<Row> rows;
  for (const auto& [a, b] : keys) {
    rows.push_back({Ints({a, b}), {std::to_string(a) + ":" + std::to_string(b)}});
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

bool Less(const KeyTuple& a, const KeyTuple& b) { return a < b; }

TEST(IndexedTable, FirstLast) {
  IndexedTable empty(IntSchema(1), {});
  EXPECT_FALSE(empty.FirstLast(Direction::kAscending).has_value());
  EXPECT_EQ(empty.CountAll(), 0);

  IndexedTable table(IntSchema(1), {{Ints({5}), {}}, {Ints({1}), {}}, {Ints({9}), {}}});
  EXPECT_EQ(table.FirstLast(Direction::kAscending)->key, Ints({1}));
  EXPECT_EQ(table.FirstLast(Direction::kDescending)->key, Ints({9}));
}

TEST(IndexedTable, FirstLastTouchesLogarithmically) {
  std::vector<Row> rows;
  for (int i = 0; i < 10000; ++i) rows.push_back({Ints({i * 3}), {}});
  IndexedTable table(IntSchema(1), std::move(rows));
  const auto before = table.touches();
  (void)table.FirstLast(Direction::kDescending);
  EXPECT_LE(table.touches() - before, static_cast<std::uint64_t>(std::ceil(std::log2(10000.0))) + 2);
}

TEST(IndexedTable, SeeksAndCountsMatchLinearScan) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    auto rows = RandomRows(rng, n, 9);
    std::vector<Row> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
    IndexedTable table(IntSchema(2), rows);

    std::uniform_int_distribution<std::int32_t> pick(-11, 11);
    const KeyTuple probe = Ints({pick(rng), pick(rng)});
    const std::size_t h = std::uniform_int_distribution<std::size_t>(1, 8)(rng);

    std::vector<Row> ge, gt, lt;
    std::int64_t less = 0;
    for (const auto& r : sorted) {
      if (!Less(r.key, probe) && ge.size() < h) ge.push_back(r);
      if (Less(probe, r.key) && gt.size() < h) gt.push_back(r);
      if (Less(r.key, probe)) ++less;
    }
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
      if (Less(it->key, probe) && lt.size() < h) lt.push_back(*it);
    }

    const auto log_n = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(n))));
    auto before = table.touches();
    EXPECT_EQ(table.SeekGe(probe, h), ge);
    EXPECT_LE(table.touches() - before, h + log_n + 2);
    before = table.touches();
    EXPECT_EQ(table.SeekGt(probe, h), gt);
    EXPECT_LE(table.touches() - before, h + log_n + 2);
    before = table.touches();
    EXPECT_EQ(table.SeekLtDesc(probe, h), lt);
    EXPECT_LE(table.touches() - before, h + log_n + 2);

    const auto slow_before = table.slow_queries();
    before = table.touches();
    EXPECT_EQ(table.CountLess(probe), less);
    EXPECT_EQ(table.touches() - before, n);
    EXPECT_EQ(table.CountAll(), static_cast<std::int64_t>(n));
    EXPECT_EQ(table.slow_queries() - slow_before, 2u);
  }
}

TEST(IndexedTable, SeekEdgeCases) {
  std::vector<Row> rows;
  for (int i = 0; i < 50; ++i) rows.push_back({Ints({i, -i}), {}});
  IndexedTable table(IntSchema(2), std::move(rows));
  EXPECT_EQ(table.SeekGe(Ints({-100, 0}), 5).front().key, Ints({0, 0}));
  EXPECT_EQ(table.SeekGe(Ints({-100, 0}), 5).size(), 5u);
  EXPECT_TRUE(table.SeekGe(Ints({100, 0}), 5).empty());
  EXPECT_TRUE(table.SeekGt(Ints({49, -49}), 3).empty());
  EXPECT_EQ(table.SeekLtDesc(Ints({10, -10}), 1).front().key, Ints({9, -9}));
  EXPECT_EQ(table.CountLess(Ints({0, 0})), 0);
  EXPECT_EQ(table.CountLess(Ints({49, -48})), 50);
  EXPECT_VSCROLL_ERROR(table.SeekGe(Ints({1}), 3), E::kSchemaError);
  EXPECT_VSCROLL_ERROR(table.SeekGe(KeyTuple{std::int64_t{1}, std::int32_t{1}}, 3),
                       E::kSchemaError);

  // Stepping forward one row at a time and back again visits every row.
  KeyTuple cursor = table.FirstLast(Direction::kAscending)->key;
  for (int i = 1; i < 50; ++i) {
    auto next = table.SeekGt(cursor, 1);
    ASSERT_EQ(next.size(), 1u);
    EXPECT_EQ(table.SeekLtDesc(next.front().key, 1).front().key, cursor);
    cursor = next.front().key;
  }
}

TEST(IndexedTable, RejectsDuplicateKeys) {
  try {
    IndexedTable table(IntSchema(1), {{Ints({1}), {}}, {Ints({2}), {}}, {Ints({1}), {}}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), E::kIngestError);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(IndexedTable, InjectedLatencyOnlyAffectsCounts) {
  std::vector<Row> rows;
  for (int i = 0; i < 100; ++i) rows.push_back({Ints({i}), {}});
  IndexedTable table(IntSchema(1), std::move(rows));
  table.set_slow_latency(std::chrono::milliseconds(200));
  auto start = std::chrono::steady_clock::now();
  (void)table.SeekGe(Ints({50}), 10);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(100));
  start = std::chrono::steady_clock::now();
  EXPECT_EQ(table.CountLess(Ints({50})), 50);
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(200));
}

// ---------------------------------------------------------------------------
// CSV

using testing::TempDir;

TEST(Csv, ReadsQuotedFieldsAndDistinguishesNull) {
  std::istringstream in("a,\"b,c\",\"\"\r\n\"x\"\"y\",,\"multi\nline\"\n");
  std::vector<std::vector<csv::Field>> records;
  csv::ReadRecords(in, [&](std::size_t, std::vector<csv::Field>& fields) {
    records.push_back(fields);
  });
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0][1].text, "b,c");
  EXPECT_TRUE(records[0][2].quoted);
  EXPECT_EQ(records[0][2].text, "");
  EXPECT_EQ(records[1][0].text, "x\"y");
  EXPECT_FALSE(records[1][1].quoted);
  EXPECT_EQ(records[1][2].text, "multi\nline");

  std::istringstream bad("a,\"open\n");
  EXPECT_VSCROLL_ERROR(csv::ReadRecords(bad, [](std::size_t, std::vector<csv::Field>&) {}),
                       E::kIngestError);
}

TEST(Csv, WriteReadRoundTrip) {
  const std::vector<std::string> fields{"plain", "", "with,comma", "quote\"d", "line\nbreak"};
  std::ostringstream out;
  csv::WriteRecord(out, fields);
  std::istringstream in(out.str());
  csv::ReadRecords(in, [&](std::size_t, std::vector<csv::Field>& read) {
    ASSERT_EQ(read.size(), fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) EXPECT_EQ(read[i].text, fields[i]);
    EXPECT_TRUE(read[1].quoted);
  });
}

using Ingest = TempDir;

KeySchema StreetSchema() {
  auto rules = std::make_shared<const CollationRules>(
      CollationRules::Parse("<а,А<б,Б<в,В<г,Г< "));
  return KeySchema({{"street", FieldKind::kString, 8, rules}, {"house", FieldKind::kInt32, 0, nullptr}});
}

TEST_F(Ingest, SmallFixtureRoundTrips) {
  const auto path = Write("streets.csv",
                          "note,house,street\n"
                          "first,2,ба\n"
                          "\"second, quoted\",1,\"ба\"\n"
                          "\n"
                          "third,7,А\n");
  auto table = IngestCsv(path, StreetSchema());
  ASSERT_EQ(table->size(), 3u);
  EXPECT_EQ(table->payload_columns(), std::vector<std::string>{"note"});
  EXPECT_EQ(table->row_at(0).key, (KeyTuple{std::string("А"), std::int32_t{7}}));
  EXPECT_EQ(table->row_at(1).key, (KeyTuple{std::string("ба"), std::int32_t{1}}));
  EXPECT_EQ(table->row_at(1).payload, std::vector<std::string>{"second, quoted"});
  EXPECT_EQ(table->CountAll(), 3);
}

TEST_F(Ingest, RejectsDuplicatesNullsAndBadHeaders) {
  auto expect_ingest_error = [&](const std::string& content, const std::string& fragment) {
    const auto path = Write("bad.csv", content);
    try {
      IngestCsv(path, StreetSchema());
      ADD_FAILURE() << content;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), E::kIngestError) << e.what();
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_ingest_error("street,house\nа,1\nб,2\nа,1\n", "row 3");
  expect_ingest_error("street,house\nа,1\n,2\n", "row 2");
  expect_ingest_error("street,house\nа,1\nб\n", "row 2");
  expect_ingest_error("street,number\nа,1\n", "house");
  expect_ingest_error("street,house\nа,x\n", "row 1");
  expect_ingest_error("street,house\nz,1\n", "row 1");

  // A quoted empty string is a value, not a NULL.
  const auto ok = Write("ok.csv", "street,house\n\"\",1\nа,1\n");
  EXPECT_EQ(IngestCsv(ok, StreetSchema())->size(), 2u);
  EXPECT_VSCROLL_ERROR(IngestCsv(dir_ / "missing.csv", StreetSchema()), E::kIngestError);
}

// ---------------------------------------------------------------------------
// SQL

using testing::HasTopLevelOr;
using testing::PredicateEvaluator;

TEST(Sql, WhereExamples) {
  EXPECT_EQ(sql::RenderWhere(IntSchema(1), Ints({5}), false, false), "k1 >= 5");
  EXPECT_EQ(sql::RenderWhere(IntSchema(2), Ints({5, 7}), false, false),
            "k1 >= 5 AND (k1 > 5 OR (k2 >= 7))");
  EXPECT_EQ(sql::RenderWhere(IntSchema(2), Ints({5, 7}), true, true),
            "k1 <= 5 AND (k1 < 5 OR (k2 < 7))");
  EXPECT_VSCROLL_ERROR(sql::RenderWhere(IntSchema(2), Ints({5}), false, false), E::kSchemaError);
}

TEST(Sql, NestedFormIsTruthTableEquivalent) {
  const KeySchema schema = IntSchema(3);
  for (bool strict : {false, true}) {
    for (bool descending : {false, true}) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          for (int c = 0; c < 4; ++c) {
            const KeyTuple bound = Ints({a, b, c});
            const std::string where = sql::RenderWhere(schema, bound, strict, descending);
            EXPECT_FALSE(HasTopLevelOr(where)) << where;
            for (int x = 0; x < 4; ++x) {
              for (int y = 0; y < 4; ++y) {
                for (int z = 0; z < 4; ++z) {
                  const std::map<std::string, long> row{{"k1", x}, {"k2", y}, {"k3", z}};
                  const KeyTuple key = Ints({x, y, z});
                  // Lexicographic comparison as a plain disjunction.
                  const bool gt = x > a || (x == a && y > b) || (x == a && y == b && z > c);
                  const bool eq = x == a && y == b && z == c;
                  const bool lt = !gt && !eq;
                  const bool expected = descending ? (lt || (!strict && eq)) : (gt || (!strict && eq));
                  EXPECT_EQ(PredicateEvaluator(where, row).Evaluate(), expected)
                      << where << " on " << x << y << z;
                }
              }
            }
          }
        }
      }
    }
  }
}

TEST(Sql, LiteralsAndStatements) {
  EXPECT_EQ(sql::Literal(std::string("O'Brien")), "'O''Brien'");
  EXPECT_EQ(sql::Literal(true), "TRUE");
  EXPECT_EQ(sql::Literal(0.1), "0.1");
  EXPECT_EQ(sql::Literal(DateTime{1456833600250}), "TIMESTAMP '2016-03-01 12:00:00.250'");
  EXPECT_EQ(sql::Literal(std::int64_t{-3}), "-3");
  EXPECT_EQ(sql::Identifier("street"), "street");
  EXPECT_EQ(sql::Identifier("house no"), "\"house no\"");
  EXPECT_EQ(sql::Identifier("a\"b"), "\"a\"\"b\"");

  const KeySchema schema = IntSchema(2);
  EXPECT_EQ(sql::RenderFirstLast("t", schema, Direction::kDescending),
            "SELECT * FROM t ORDER BY k1 DESC, k2 DESC LIMIT 1");
  EXPECT_EQ(sql::RenderSeek("t", schema, Ints({1, 2}), 20, false, false),
            "SELECT * FROM t WHERE k1 >= 1 AND (k1 > 1 OR (k2 >= 2)) ORDER BY k1, k2 LIMIT 20");
  EXPECT_EQ(sql::RenderCountAll("t"), "SELECT COUNT(*) FROM t");
  EXPECT_EQ(sql::RenderCountLess("t", schema, Ints({1, 2})),
            "SELECT COUNT(*) FROM t WHERE k1 <= 1 AND (k1 < 1 OR (k2 < 2))");
}

}  // namespace
}  // namespace vscroll
