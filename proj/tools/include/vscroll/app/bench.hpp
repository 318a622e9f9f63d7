#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vscroll/app/wire.hpp"
#include "vscroll/dataset.hpp"
#include "vscroll/engine.hpp"

namespace vscroll::app {

// One line of a bench script. Commands ('#' starts a comment):
//
//   scroll <lambda|random|P%> [times]   drag without releasing
//   release                             release and wait for the correction
//   cycles <n>                          n times: scroll random, release
//   locate <v1>|<v2>|...                position to a key given as text values
//   step <n>                            small step from the current window
//   steps <n>                           n random anchors, each stepped by ±1 and ±page
//   warmup [fraction max_iter]          run warmup, then report in the "after" phase
struct BenchCommand {
  enum class Kind { kScroll, kRelease, kCycles, kLocate, kStep, kSteps, kWarmup };
  Kind kind = Kind::kScroll;
  std::size_t line = 0;
  // kScroll: target; negative means random, `percent` set means P%.
  RowIndex lambda = -1;
  std::optional<double> percent;
  std::int64_t count = 1;
  std::vector<std::string> values;
  std::optional<double> threshold;
  std::optional<int> max_iter;
};

// Throws Error(kConfigError) naming the offending line.
std::vector<BenchCommand> ParseBenchScript(std::string_view text);

// Endpoints-only drags, release cycles, warmup, more cycles, step checks.
std::string_view DefaultBenchScript();

struct ErrorStats {
  std::size_t count = 0;
  double sum = 0;
  RowIndex max = 0;

  void Add(RowIndex error);
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
};

struct PhaseStats {
  // |estimated lambda - exact row number of the first displayed row|.
  ErrorStats scroll;
  ErrorStats locate;
  // Thumb corrections after release.
  ErrorStats bounce;
};

struct BenchReport {
  std::size_t rows = 0;
  RowIndex lambda_max = 0;
  PhaseStats before;
  PhaseStats after;
  std::optional<WarmupReport> warmup;
  std::size_t steps_checked = 0;
  std::size_t adjacency_errors = 0;
  // Counting queries issued by user calls (must stay 0) and by the worker.
  std::uint64_t user_slow_queries = 0;
  std::uint64_t background_slow_queries = 0;
  // Index entries touched per user operation, by command name.
  std::map<std::string, ErrorStats> touches;

  void Print(std::ostream& out) const;
  Json ToJson() const;
};

// Replays the script against a fresh engine (warmup only when the script
// asks). Random choices derive from seed.
BenchReport RunBench(std::shared_ptr<const IndexedTable> table, EngineConfig config,
                     const std::vector<BenchCommand>& script, std::uint64_t seed);

}  // namespace vscroll::app
