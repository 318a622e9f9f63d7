#include "vscroll/app/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "tables.hpp"
#include "vscroll/app/generator.hpp"

namespace vscroll::app {
namespace {

using Kind = BenchCommand::Kind;

TEST(BenchScript, ParsesEveryCommand) {
  const auto script = ParseBenchScript(R"(
scroll 10
scroll random 3   # comment
scroll 25%
release
cycles 4
locate Нижняя 3-я|12
step -1
steps 2
warmup
warmup 0.1 16
)");
  ASSERT_EQ(script.size(), 10u);
  EXPECT_EQ(script[0].lambda, 10);
  EXPECT_EQ(script[1].lambda, -1);
  EXPECT_EQ(script[1].count, 3);
  EXPECT_DOUBLE_EQ(*script[2].percent, 25.0);
  EXPECT_EQ(script[3].kind, Kind::kRelease);
  EXPECT_EQ(script[4].kind, Kind::kCycles);
  EXPECT_EQ(script[5].values, (std::vector<std::string>{"Нижняя 3-я", "12"}));
  EXPECT_EQ(script[6].count, -1);
  EXPECT_EQ(script[7].kind, Kind::kSteps);
  EXPECT_FALSE(script[8].threshold.has_value());
  EXPECT_DOUBLE_EQ(*script[9].threshold, 0.1);
  EXPECT_EQ(*script[9].max_iter, 16);
  EXPECT_EQ(script[9].line, 11u);
  EXPECT_NO_THROW(ParseBenchScript(DefaultBenchScript()));
}

TEST(BenchScript, RejectsBadLines) {
  for (const char* text : {"jump 3", "scroll", "scroll x", "scroll -5", "scroll 120%",
                           "release now", "cycles -1", "warmup 0.2", "locate", "steps 1 2"}) {
    SCOPED_TRACE(text);
    EXPECT_VSCROLL_ERROR(ParseBenchScript(text), ErrorCode::kConfigError);
  }
}

TEST(Bench, EndpointsOnlyErrorOnUniformData) {
  // One table's error follows a single random path, so average over tables.
  constexpr int kTables = 20;
  double total = 0;
  for (int seed = 1; seed <= kTables; ++seed) {
    const auto table = testing::UniformIntTable(10000, static_cast<std::uint64_t>(seed));
    const BenchReport report =
        RunBench(table, EngineConfig{}, ParseBenchScript("scroll random 200"), seed);
    ASSERT_EQ(report.lambda_max, 9999);
    ASSERT_EQ(report.before.scroll.count, 200u);
    EXPECT_EQ(report.user_slow_queries, 0u);
    EXPECT_EQ(report.background_slow_queries, 0u);
    total += report.before.scroll.mean();
  }
  EXPECT_LT(total / kTables, 0.5 * std::sqrt(9999.0));
}

TEST(Bench, BounceAfterWarmupOnSkewedData) {
  const auto table = BuildTable(Generate({GenMode::kClustered, 100000, 12}));
  const BenchReport report =
      RunBench(table, EngineConfig{}, ParseBenchScript("warmup 0.2 64\ncycles 100"), 5);
  ASSERT_TRUE(report.warmup.has_value());
  EXPECT_EQ(report.warmup->stop, WarmupStop::kThreshold);
  EXPECT_EQ(report.after.bounce.count, 100u);
  EXPECT_LE(static_cast<double>(report.after.bounce.max), 0.25 * static_cast<double>(report.lambda_max));
  EXPECT_EQ(report.user_slow_queries, 0u);
  EXPECT_EQ(report.background_slow_queries,
            static_cast<std::uint64_t>(report.warmup->iterations) + 100u);
}

TEST(Bench, SmallStepsMatchOracle) {
  const auto table = BuildTable(Generate({GenMode::kComposite, 20000, 3}));
  const BenchReport report = RunBench(
      table, EngineConfig{}, ParseBenchScript("steps 100\nscroll 0\nstep -1\nscroll 100%\nstep 1"), 9);
  EXPECT_EQ(report.steps_checked, 402u);
  EXPECT_EQ(report.adjacency_errors, 0u);
  EXPECT_EQ(report.user_slow_queries, 0u);
  EXPECT_EQ(report.touches.at("step").count, 402u);
}

TEST(Bench, LocateErrorIsZeroForExactLookups) {
  const auto table = testing::SequentialIntTable(1000, 2);
  const BenchReport report =
      RunBench(table, EngineConfig{}, ParseBenchScript("locate 0\nlocate 1998"), 1);
  EXPECT_EQ(report.before.locate.count, 2u);
  // Evenly spaced keys interpolate exactly.
  EXPECT_EQ(report.before.locate.max, 0);
  EXPECT_THROW(RunBench(table, EngineConfig{}, ParseBenchScript("locate 1|2"), 1), Error);
}

}  // namespace
}  // namespace vscroll::app
