#include "vscroll/app/verify.hpp"

#include <algorithm>
#include <random>

#include "vscroll/app/oracle.hpp"
#include "vscroll/error.hpp"

namespace vscroll::app {
namespace {

constexpr std::size_t kMaxSamples = 5;

std::string Describe(const KeyTuple& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) out += (i ? "," : "") + FormatFieldValue(key[i]);
  return out + ")";
}

Ordinal RandomBelow(const Ordinal& bound, std::mt19937_64& rng) {
  Ordinal value = 0;
  const unsigned words = static_cast<unsigned>(boost::multiprecision::msb(bound) / 64 + 2);
  for (unsigned i = 0; i < words; ++i) value = (value << 64) | Ordinal(rng());
  return value % bound;
}

std::vector<Row> Slice(const IndexedTable& table, RowIndex begin, RowIndex end) {
  std::vector<Row> rows;
  begin = std::clamp<RowIndex>(begin, 0, static_cast<RowIndex>(table.size()));
  end = std::clamp<RowIndex>(end, begin, static_cast<RowIndex>(table.size()));
  for (RowIndex i = begin; i < end; ++i) rows.push_back(table.row_at(static_cast<std::size_t>(i)));
  return rows;
}

// Existing keys and keys decoded from random ordinals, half each.
std::vector<KeyTuple> ProbeKeys(const IndexedTable& table, std::size_t n, std::mt19937_64& rng) {
  const CompositeCodec& codec = table.schema().codec();
  const Ordinal bound = table.ordinal_at(table.size() - 1) + 2;
  std::vector<KeyTuple> keys;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      keys.push_back(table.row_at(rng() % table.size()).key);
    } else {
      keys.push_back(codec.DecodeClamped(RandomBelow(bound, rng)));
    }
  }
  return keys;
}

void CheckOrder(const IndexedTable& table, SuiteResult& suite) {
  for (std::size_t i = 1; i < table.size(); ++i) {
    ++suite.checks;
    const KeyTuple& prev = table.row_at(i - 1).key;
    const KeyTuple& next = table.row_at(i).key;
    if (CompareKeys(table.schema(), prev, next) >= 0 || table.ordinal_at(i - 1) >= table.ordinal_at(i)) {
      suite.Fail("rows " + std::to_string(i) + " and " + std::to_string(i + 1) + ": " +
                 Describe(prev) + " / " + Describe(next));
    }
  }
}

void CheckRoundTrip(const IndexedTable& table, SuiteResult& suite) {
  const std::size_t stride = std::max<std::size_t>(1, table.size() / 20000);
  for (std::size_t i = 0; i < table.size(); i += stride) {
    ++suite.checks;
    const KeyTuple& key = table.row_at(i).key;
    if (table.schema().codec().Decode(table.ordinal_at(i)) != key ||
        table.schema().Encode(key) != table.ordinal_at(i)) {
      suite.Fail("row " + std::to_string(i + 1) + " " + Describe(key));
    }
  }
}

void CheckSeeks(const IndexedTable& table, std::size_t h, const std::vector<KeyTuple>& probes,
                SuiteResult& suite) {
  const auto h_index = static_cast<RowIndex>(h);
  for (const KeyTuple& key : probes) {
    const RowIndex pos = OraclePosition(table, key);
    const bool present = static_cast<std::size_t>(pos) < table.size() &&
                         table.row_at(static_cast<std::size_t>(pos)).key == key;
    const RowIndex after = pos + (present ? 1 : 0);

    suite.checks += 3;
    if (table.SeekGe(key, h) != Slice(table, pos, pos + h_index)) {
      suite.Fail("seek >= " + Describe(key));
    }
    if (table.SeekGt(key, h) != Slice(table, after, after + h_index)) {
      suite.Fail("seek > " + Describe(key));
    }
    std::vector<Row> below = Slice(table, pos - h_index, pos);
    std::reverse(below.begin(), below.end());
    if (table.SeekLtDesc(key, h) != below) suite.Fail("seek < " + Describe(key));
  }
}

void CheckCounts(const IndexedTable& table, const std::vector<KeyTuple>& probes,
                 SuiteResult& suite) {
  ++suite.checks;
  if (table.CountAll() != static_cast<std::int64_t>(table.size())) suite.Fail("count all");
  for (const KeyTuple& key : probes) {
    ++suite.checks;
    if (table.CountLess(key) != OraclePosition(table, key)) suite.Fail("count < " + Describe(key));
  }
}

void CheckTable(ScrollEngine& engine, SuiteResult& suite) {
  const IndexedTable& table = engine.table();
  engine.StartWarmup(engine.config().threshold_fraction, engine.config().max_iter);
  engine.WaitIdle();
  const auto points = engine.InterpolationPoints();
  for (std::size_t i = 0; i < points.size(); ++i) {
    ++suite.checks;
    const InterpolationPoint& p = points[i];
    const bool real = p.lambda >= 0 && static_cast<std::size_t>(p.lambda) < table.size() &&
                      table.ordinal_at(static_cast<std::size_t>(p.lambda)) == p.kappa;
    const bool monotone = i == 0 || (points[i - 1].lambda < p.lambda && points[i - 1].kappa < p.kappa);
    if (!real || !monotone) suite.Fail("point lambda=" + std::to_string(p.lambda));
  }
}

void CheckSteps(ScrollEngine& engine, std::size_t anchors, std::mt19937_64& rng,
                SuiteResult& suite) {
  const IndexedTable& table = engine.table();
  const auto n = static_cast<RowIndex>(table.size());
  const auto h = static_cast<RowIndex>(engine.config().h);
  const auto page = static_cast<std::int64_t>(engine.config().effective_page_size());
  const std::uint64_t counts_before = IndexedTable::ThreadSlowQueries();
  for (std::size_t i = 0; i < anchors; ++i) {
    for (std::int64_t step : {std::int64_t{1}, std::int64_t{-1}, page, -page}) {
      const Window anchor = engine.OnScroll(static_cast<RowIndex>(rng() % static_cast<std::uint64_t>(n)));
      const RowIndex start = OraclePosition(table, anchor.rows.front().key);
      const RowIndex expected = std::clamp<RowIndex>(start + step, 0, std::max<RowIndex>(0, n - h));
      ++suite.checks;
      if (engine.SmallStep(step).rows != Slice(table, expected, expected + h)) {
        suite.Fail("step " + std::to_string(step) + " from row " + std::to_string(start + 1));
      }
    }
  }
  ++suite.checks;
  if (IndexedTable::ThreadSlowQueries() != counts_before) {
    suite.Fail("user calls issued counting queries");
  }
}

template <typename Check>
void RunSuite(VerifyReport& report, const std::string& name, Check check) {
  SuiteResult suite;
  suite.name = name;
  try {
    check(suite);
  } catch (const std::exception& e) {
    suite.error = e.what();
  }
  report.suites.push_back(std::move(suite));
}

}  // namespace

void SuiteResult::Fail(std::string what) {
  ++failures;
  if (samples.size() < kMaxSamples) samples.push_back(std::move(what));
}

bool VerifyReport::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

void VerifyReport::Print(std::ostream& out) const {
  for (const SuiteResult& suite : suites) {
    out << "suite " << suite.name << ": ";
    if (suite.error) {
      out << "ERROR " << *suite.error << '\n';
      continue;
    }
    out << suite.checks << " checks, " << suite.failures << " failures"
        << (suite.ok() ? "" : "  FAIL") << '\n';
    for (const std::string& sample : suite.samples) out << "  " << sample << '\n';
  }
  out << "verify: " << (ok() ? "PASS" : "FAIL") << '\n';
}

VerifyReport VerifyTable(std::shared_ptr<const IndexedTable> table, EngineConfig config,
                         const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  RunSuite(report, "order", [&](SuiteResult& s) { CheckOrder(*table, s); });
  RunSuite(report, "roundtrip", [&](SuiteResult& s) { CheckRoundTrip(*table, s); });
  if (table->empty() || !report.ok()) return report;

  const auto probes = ProbeKeys(*table, options.samples, rng);
  RunSuite(report, "seek", [&](SuiteResult& s) { CheckSeeks(*table, config.h, probes, s); });
  const std::vector<KeyTuple> count_probes(
      probes.begin(), probes.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(probes.size(), 50)));
  RunSuite(report, "count", [&](SuiteResult& s) { CheckCounts(*table, count_probes, s); });

  config.auto_warmup = false;
  ScrollEngine engine(table, config);
  engine.WaitIdle();
  RunSuite(report, "table", [&](SuiteResult& s) { CheckTable(engine, s); });
  RunSuite(report, "step", [&](SuiteResult& s) { CheckSteps(engine, options.samples / 4 + 1, rng, s); });
  return report;
}

VerifyReport RunVerify(const AppConfig& config, const VerifyOptions& options) {
  std::shared_ptr<IndexedTable> table;
  VerifyReport report;
  RunSuite(report, "ingest", [&](SuiteResult& s) {
    ++s.checks;
    table = LoadTable(config);
  });
  if (!table) return report;
  report.suites.front().checks = table->size();
  VerifyReport rest = VerifyTable(table, config.engine, options);
  report.suites.insert(report.suites.end(), rest.suites.begin(), rest.suites.end());
  return report;
}

}  // namespace vscroll::app
