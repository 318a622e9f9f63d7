#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vscroll/app/config.hpp"
#include "vscroll/dataset.hpp"
#include "vscroll/engine.hpp"

namespace vscroll::app {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  // The first few mismatches, for the report.
  std::vector<std::string> samples;
  // Set when the suite could not run at all.
  std::optional<std::string> error;

  bool ok() const { return failures == 0 && !error; }
  void Fail(std::string what);
};

struct VerifyReport {
  std::vector<SuiteResult> suites;

  bool ok() const;
  void Print(std::ostream& out) const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Random probes per sampled suite.
  std::size_t samples = 200;
};

// Suites, each checked against the comparator oracle:
//   ingest     the dataset loads
//   order      adjacent rows ascend by key and by ordinal
//   roundtrip  decoding a row's ordinal gives its key back
//   seek       seek results equal the oracle slices
//   count      counts equal oracle positions
//   table      interpolation points after warmup are real (row, ordinal) pairs
//   step       small steps show the oracle-adjacent rows without counting
VerifyReport RunVerify(const AppConfig& config, const VerifyOptions& options);
VerifyReport VerifyTable(std::shared_ptr<const IndexedTable> table, EngineConfig config,
                         const VerifyOptions& options);

}  // namespace vscroll::app
