#include "vscroll/app/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "vscroll/app/oracle.hpp"
#include "vscroll/error.hpp"

namespace vscroll::app {
namespace {

[[noreturn]] void Fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kConfigError, "script line " + std::to_string(line) + ": " + message);
}

template <typename T>
T Number(std::size_t line, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) Fail(line, "bad number '" + text + "'");
  return value;
}

std::vector<std::string> Split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(separator, start);
    parts.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

constexpr char kDefaultScript[] = R"(# endpoints-only drags
scroll random 200
# drag and release: each release refines the table
cycles 50
warmup
cycles 200
steps 100
)";

class Runner {
 public:
  Runner(std::shared_ptr<const IndexedTable> table, EngineConfig config, std::uint64_t seed)
      : table_(*table), engine_(table, WithoutAutoWarmup(config)), rng_(seed) {
    engine_.WaitIdle();
    report_.rows = table_.size();
    report_.lambda_max = engine_.lambda_max();
  }

  void Run(const std::vector<BenchCommand>& script) {
    const std::uint64_t background_before = table_.slow_queries();
    const std::uint64_t user_before = IndexedTable::ThreadSlowQueries();
    for (const BenchCommand& command : script) Execute(command);
    engine_.WaitIdle();
    report_.user_slow_queries = IndexedTable::ThreadSlowQueries() - user_before;
    report_.background_slow_queries =
        table_.slow_queries() - background_before - report_.user_slow_queries;
  }

  BenchReport report() const { return report_; }

 private:
  static EngineConfig WithoutAutoWarmup(EngineConfig config) {
    config.auto_warmup = false;
    return config;
  }

  PhaseStats& phase() { return warmed_ ? report_.after : report_.before; }

  RowIndex RandomLambda() {
    return static_cast<RowIndex>(rng_() % static_cast<std::uint64_t>(engine_.lambda_max() + 1));
  }

  template <typename Call>
  Window Measured(const std::string& name, Call call) {
    const std::uint64_t before = table_.touches();
    Window window = call();
    report_.touches[name].Add(static_cast<RowIndex>(table_.touches() - before));
    return window;
  }

  RowIndex ErrorOf(const Window& window) const {
    if (window.rows.empty()) return 0;
    return std::llabs(window.lambda - OraclePosition(table_, window.rows.front().key));
  }

  void Scroll(RowIndex lambda) {
    const Window window = Measured("scroll", [&] { return engine_.OnScroll(lambda); });
    phase().scroll.Add(ErrorOf(window));
  }

  void Release() {
    const RowIndex shown = engine_.current().lambda;
    engine_.OnScrollRelease();
    engine_.WaitIdle();
    const auto outcome = engine_.last_refinement();
    if (outcome && outcome->applied) phase().bounce.Add(std::llabs(outcome->lambda_exact - shown));
  }

  void Step(std::int64_t n) {
    const auto rows = static_cast<RowIndex>(table_.size());
    const auto h = static_cast<RowIndex>(engine_.config().h);
    const Window before = engine_.current();
    if (before.rows.empty()) return;
    const RowIndex start = OraclePosition(table_, before.rows.front().key);
    const RowIndex expected = std::clamp<RowIndex>(start + n, 0, std::max<RowIndex>(0, rows - h));
    const Window after = Measured("step", [&] { return engine_.SmallStep(n); });
    ++report_.steps_checked;
    bool adjacent = static_cast<RowIndex>(after.rows.size()) == std::min(h, rows);
    for (std::size_t i = 0; adjacent && i < after.rows.size(); ++i) {
      adjacent = after.rows[i] == table_.row_at(static_cast<std::size_t>(expected) + i);
    }
    if (!adjacent) ++report_.adjacency_errors;
  }

  void Execute(const BenchCommand& command) {
    using Kind = BenchCommand::Kind;
    const auto page = static_cast<std::int64_t>(engine_.config().effective_page_size());
    switch (command.kind) {
      case Kind::kScroll:
        for (std::int64_t i = 0; i < command.count; ++i) {
          RowIndex lambda = command.lambda;
          if (command.percent) {
            lambda = std::llround(*command.percent / 100.0 * static_cast<double>(engine_.lambda_max()));
          } else if (lambda < 0) {
            lambda = RandomLambda();
          }
          Scroll(lambda);
        }
        break;
      case Kind::kRelease:
        Release();
        break;
      case Kind::kCycles:
        for (std::int64_t i = 0; i < command.count; ++i) {
          Scroll(RandomLambda());
          Release();
        }
        break;
      case Kind::kLocate: {
        const KeySchema& schema = table_.schema();
        if (command.values.size() != schema.arity()) {
          Fail(command.line, "locate needs " + std::to_string(schema.arity()) + " values");
        }
        KeyTuple key;
        for (std::size_t i = 0; i < schema.arity(); ++i) {
          key.push_back(ParseFieldValue(schema.fields()[i].kind, command.values[i]));
        }
        const Window window = Measured("locate", [&] { return engine_.PositionTo(key); });
        phase().locate.Add(ErrorOf(window));
        break;
      }
      case Kind::kStep:
        Step(command.count);
        break;
      case Kind::kSteps:
        for (std::int64_t i = 0; i < command.count; ++i) {
          for (std::int64_t n : {std::int64_t{1}, std::int64_t{-1}, page, -page}) {
            engine_.OnScroll(RandomLambda());
            Step(n);
          }
        }
        break;
      case Kind::kWarmup:
        engine_.StartWarmup(command.threshold.value_or(engine_.config().threshold_fraction),
                            command.max_iter.value_or(engine_.config().max_iter));
        engine_.WaitIdle();
        report_.warmup = engine_.warmup_report();
        warmed_ = true;
        break;
    }
  }

  const IndexedTable& table_;
  ScrollEngine engine_;
  std::mt19937_64 rng_;
  BenchReport report_;
  bool warmed_ = false;
};

Json StatsJson(const ErrorStats& stats) {
  return {{"count", stats.count}, {"mean", stats.mean()}, {"max", stats.max}};
}

Json PhaseJson(const PhaseStats& phase) {
  return {{"scroll_error", StatsJson(phase.scroll)},
          {"locate_error", StatsJson(phase.locate)},
          {"bounce", StatsJson(phase.bounce)}};
}

void PrintPhase(std::ostream& out, const char* name, const PhaseStats& phase, RowIndex lambda_max) {
  const auto share = [&](RowIndex v) {
    return lambda_max > 0 ? 100.0 * static_cast<double>(v) / static_cast<double>(lambda_max) : 0.0;
  };
  out << name << ":\n"
      << "  scroll error   n=" << phase.scroll.count << " mean=" << phase.scroll.mean()
      << " max=" << phase.scroll.max << '\n'
      << "  locate error   n=" << phase.locate.count << " mean=" << phase.locate.mean()
      << " max=" << phase.locate.max << '\n'
      << "  bounce         n=" << phase.bounce.count << " mean=" << phase.bounce.mean()
      << " max=" << phase.bounce.max << " (" << share(phase.bounce.max) << "% of lambda_max)\n";
}

}  // namespace

std::vector<BenchCommand> ParseBenchScript(std::string_view text) {
  using Kind = BenchCommand::Kind;
  std::vector<BenchCommand> script;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    raw = raw.substr(0, raw.find('#'));
    std::istringstream words(raw);
    std::vector<std::string> args;
    for (std::string word; words >> word;) args.push_back(word);
    if (args.empty()) continue;

    BenchCommand command;
    command.line = line_no;
    const std::string& name = args[0];
    const auto expect_args = [&](std::size_t min, std::size_t max) {
      if (args.size() - 1 < min || args.size() - 1 > max) Fail(line_no, "wrong arguments to " + name);
    };
    if (name == "scroll") {
      expect_args(1, 2);
      command.kind = Kind::kScroll;
      if (args[1] == "random") {
        command.lambda = -1;
      } else if (args[1].back() == '%') {
        command.percent = Number<double>(line_no, args[1].substr(0, args[1].size() - 1));
        if (*command.percent < 0 || *command.percent > 100) Fail(line_no, "percent out of range");
      } else {
        command.lambda = Number<RowIndex>(line_no, args[1]);
        if (command.lambda < 0) Fail(line_no, "negative lambda");
      }
      if (args.size() == 3) command.count = Number<std::int64_t>(line_no, args[2]);
    } else if (name == "release") {
      expect_args(0, 0);
      command.kind = Kind::kRelease;
    } else if (name == "cycles" || name == "steps") {
      expect_args(1, 1);
      command.kind = name == "cycles" ? Kind::kCycles : Kind::kSteps;
      command.count = Number<std::int64_t>(line_no, args[1]);
    } else if (name == "step") {
      expect_args(1, 1);
      command.kind = Kind::kStep;
      command.count = Number<std::int64_t>(line_no, args[1]);
    } else if (name == "locate") {
      if (args.size() < 2) Fail(line_no, "locate needs a key");
      command.kind = Kind::kLocate;
      // Values may contain spaces; everything after the command word is the key.
      const std::string rest = raw.substr(raw.find("locate") + 6);
      const auto first = rest.find_first_not_of(" \t");
      const auto last = rest.find_last_not_of(" \t\r");
      command.values = Split(rest.substr(first, last - first + 1), '|');
    } else if (name == "warmup") {
      if (args.size() != 1 && args.size() != 3) Fail(line_no, "warmup takes none or two arguments");
      command.kind = Kind::kWarmup;
      if (args.size() == 3) {
        command.threshold = Number<double>(line_no, args[1]);
        command.max_iter = Number<int>(line_no, args[2]);
      }
    } else {
      Fail(line_no, "unknown command '" + name + "'");
    }
    if (command.count < 0 && command.kind != Kind::kStep) Fail(line_no, "negative count");
    script.push_back(std::move(command));
  }
  return script;
}

std::string_view DefaultBenchScript() { return kDefaultScript; }

void ErrorStats::Add(RowIndex error) {
  ++count;
  sum += static_cast<double>(error);
  max = std::max(max, error);
}

BenchReport RunBench(std::shared_ptr<const IndexedTable> table, EngineConfig config,
                     const std::vector<BenchCommand>& script, std::uint64_t seed) {
  Runner runner(std::move(table), config, seed);
  runner.Run(script);
  return runner.report();
}

void BenchReport::Print(std::ostream& out) const {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(2);
  out << "rows=" << rows << " lambda_max=" << lambda_max
      << " half_sqrt_lambda_max=" << 0.5 * std::sqrt(static_cast<double>(lambda_max)) << '\n';
  PrintPhase(out, "before warmup", before, lambda_max);
  if (warmup) {
    out << "warmup: iterations=" << warmup->iterations << " max_gap=" << warmup->max_gap
        << " stop=" << WarmupStopName(warmup->stop) << '\n';
    PrintPhase(out, "after warmup", after, lambda_max);
  }
  out << "small steps: " << steps_checked << " checked, " << adjacency_errors
      << " adjacency errors\n";
  out << "slow queries: user=" << user_slow_queries << " background=" << background_slow_queries
      << '\n';
  for (const auto& [name, stats] : touches) {
    out << "touches/" << name << ": n=" << stats.count << " mean=" << stats.mean()
        << " max=" << stats.max << '\n';
  }
  out.flags(flags);
}

Json BenchReport::ToJson() const {
  Json touches_json = Json::object();
  for (const auto& [name, stats] : touches) touches_json[name] = StatsJson(stats);
  Json out = {{"rows", rows},
              {"lambda_max", lambda_max},
              {"before_warmup", PhaseJson(before)},
              {"after_warmup", PhaseJson(after)},
              {"steps_checked", steps_checked},
              {"adjacency_errors", adjacency_errors},
              {"user_slow_queries", user_slow_queries},
              {"background_slow_queries", background_slow_queries},
              {"touches", touches_json}};
  if (warmup) {
    out["warmup"] = {{"iterations", warmup->iterations},
                     {"max_gap", warmup->max_gap},
                     {"stop", WarmupStopName(warmup->stop)}};
  }
  return out;
}

}  // namespace vscroll::app
