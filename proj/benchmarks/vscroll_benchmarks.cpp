#include <benchmark/benchmark.h>

#include <random>

#include "vscroll/app/generator.hpp"
#include "vscroll/engine.hpp"
#include "vscroll/interpolator.hpp"
#include "vscroll/numerators.hpp"

namespace {

using namespace vscroll;

const app::GeneratedData& Clustered() {
  static const app::GeneratedData data = app::Generate({app::GenMode::kClustered, 100000, 3});
  return data;
}

const std::shared_ptr<IndexedTable>& ClusteredTable() {
  static const auto table = app::BuildTable(Clustered());
  return table;
}

void BM_EncodeInt64(benchmark::State& state) {
  const ScalarCodec codec = ScalarCodec::Int64();
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(codec.Encode(static_cast<std::int64_t>(rng())));
}
BENCHMARK(BM_EncodeInt64);

void BM_EncodeCollated(benchmark::State& state) {
  const KeySchema schema = Clustered().schema();
  const auto& rows = Clustered().rows;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schema.Encode(rows[i].key));
    i = (i + 7919) % rows.size();
  }
}
BENCHMARK(BM_EncodeCollated);

void BM_DecodeCollated(benchmark::State& state) {
  const KeySchema schema = Clustered().schema();
  const Ordinal ordinal = schema.Encode(Clustered().rows[Clustered().rows.size() / 2].key);
  for (auto _ : state) benchmark::DoNotOptimize(schema.codec().Decode(ordinal));
}
BENCHMARK(BM_DecodeCollated);

void BM_LambdaFor(benchmark::State& state) {
  const auto points = static_cast<RowIndex>(state.range(0));
  InterpolationTable table(0, Ordinal(1) << 100, 1000000, 4096);
  for (RowIndex i = 1; i < points; ++i) table.Insert(i * 1000000 / points, (Ordinal(1) << 100) / points * i);
  std::mt19937_64 rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(table.LambdaFor(Ordinal(rng()) << 36));
}
BENCHMARK(BM_LambdaFor)->Arg(2)->Arg(64)->Arg(4096);

void BM_KappaFor(benchmark::State& state) {
  InterpolationTable table(0, Ordinal(1) << 100, 1000000, 4096);
  for (RowIndex i = 1; i < 4096; ++i) table.Insert(i * 244, (Ordinal(1) << 100) / 4096 * i);
  std::mt19937_64 rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(table.KappaFor(static_cast<RowIndex>(rng() % 1000000)));
}
BENCHMARK(BM_KappaFor);

void BM_SeekGe(benchmark::State& state) {
  const auto& table = ClusteredTable();
  const auto& rows = Clustered().rows;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table->SeekGe(rows[i].key, 20));
    i = (i + 7919) % rows.size();
  }
}
BENCHMARK(BM_SeekGe);

void BM_OnScroll(benchmark::State& state) {
  EngineConfig config;
  config.auto_warmup = false;
  ScrollEngine engine(ClusteredTable(), config);
  engine.WaitIdle();
  std::mt19937_64 rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.OnScroll(static_cast<RowIndex>(rng() % 100000)));
  }
}
BENCHMARK(BM_OnScroll);

void BM_SmallStep(benchmark::State& state) {
  EngineConfig config;
  config.auto_warmup = false;
  ScrollEngine engine(ClusteredTable(), config);
  engine.WaitIdle();
  engine.OnScroll(50000);
  std::int64_t direction = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.SmallStep(direction));
    direction = -direction;
  }
}
BENCHMARK(BM_SmallStep);

}  // namespace

BENCHMARK_MAIN();
