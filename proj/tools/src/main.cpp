#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "vscroll/app/bench.hpp"
#include "vscroll/app/config.hpp"
#include "vscroll/app/generator.hpp"
#include "vscroll/app/service.hpp"
#include "vscroll/app/verify.hpp"
#include "vscroll/error.hpp"
#include "vscroll/sql.hpp"

namespace {

using namespace vscroll;
using namespace vscroll::app;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

int Serve(const std::string& config_path, const std::string& listen) {
  AppConfig config = LoadAppConfig(config_path);
  if (!listen.empty()) {
    std::tie(config.listen_host, config.listen_port) = ParseListenAddress(listen);
  }

  // Signals are taken by a dedicated thread so the server can be stopped cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service([config] { return std::shared_ptr<const IndexedTable>(LoadTable(config)); },
                  config.engine);
  const int port = service.Bind(config.listen_host, config.listen_port);
  std::cout << "listening on " << config.listen_host << ":" << port << std::endl;
  std::thread waiter([&] {
    int signal = 0;
    sigwait(&signals, &signal);
    service.Stop();
  });
  waiter.detach();
  service.Listen();
  return 0;
}

int Verify(const std::string& config_path, std::uint64_t seed, std::size_t samples) {
  const AppConfig config = LoadAppConfig(config_path);
  const VerifyReport report = RunVerify(config, {seed, samples});
  report.Print(std::cout);
  return report.ok() ? 0 : 1;
}

int Bench(const std::string& config_path, const std::string& script_path, std::uint64_t seed,
          bool json) {
  const AppConfig config = LoadAppConfig(config_path);
  const auto script = ParseBenchScript(script_path.empty() ? std::string(DefaultBenchScript())
                                                           : ReadFile(script_path));
  const BenchReport report = RunBench(LoadTable(config), config.engine, script, seed);
  if (json) {
    std::cout << report.ToJson().dump(2) << '\n';
  } else {
    report.Print(std::cout);
  }
  return report.adjacency_errors == 0 && report.user_slow_queries == 0 ? 0 : 1;
}

int Gen(const std::string& mode, std::size_t rows, std::uint64_t seed, const std::string& out_dir,
        const std::string& csv_path) {
  const GeneratedData data = Generate({ParseGenMode(mode), rows, seed});
  if (!csv_path.empty()) {
    if (csv_path == "-") {
      WriteCsv(data, std::cout);
    } else {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + csv_path);
      WriteCsv(data, out);
    }
    return 0;
  }
  std::cout << WriteBundle(data, out_dir).string() << '\n';
  return 0;
}

int Inspect(const std::string& config_path, bool warmup, const std::string& sql_keys) {
  const AppConfig config = LoadAppConfig(config_path);
  auto table = LoadTable(config);
  if (!sql_keys.empty()) {
    const KeySchema& schema = table->schema();
    std::vector<std::string> values;
    std::stringstream in(sql_keys);
    for (std::string value; std::getline(in, value, '|');) values.push_back(value);
    if (values.size() != schema.arity()) {
      throw Error(ErrorCode::kSchemaError, "expected " + std::to_string(schema.arity()) + " values");
    }
    KeyTuple key;
    for (std::size_t i = 0; i < values.size(); ++i) {
      key.push_back(ParseFieldValue(schema.fields()[i].kind, values[i]));
    }
    const std::string& name = config.table_name;
    std::cout << sql::RenderFirstLast(name, schema, Direction::kAscending) << '\n'
              << sql::RenderFirstLast(name, schema, Direction::kDescending) << '\n'
              << sql::RenderSeek(name, schema, key, config.engine.h, false, false) << '\n'
              << sql::RenderCountAll(name) << '\n'
              << sql::RenderCountLess(name, schema, key) << '\n';
    return 0;
  }
  EngineConfig engine_config = config.engine;
  engine_config.auto_warmup = warmup;
  ScrollEngine engine(std::move(table), engine_config);
  engine.WaitIdle();
  std::cout << "# rows=" << engine.table().size() << " lambda_max=" << engine.lambda_max();
  const WarmupReport report = engine.warmup_report();
  if (warmup) {
    std::cout << " warmup=" << WarmupStopName(report.stop) << " iterations=" << report.iterations;
  }
  std::cout << "\n# lambda kappa\n";
  for (const auto& point : engine.InterpolationPoints()) {
    std::cout << point.lambda << ' ' << ToDecimal(point.kappa) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Virtual scrolling over an indexed table"};
  cli.require_subcommand(1);

  std::string config_path;
  std::string script_path;
  std::string listen;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  bool json = false;

  auto* serve = cli.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  serve->add_option("--listen", listen, "host:port, overrides the config");

  auto* verify = cli.add_subcommand("verify", "Check the dataset and engine against oracles");
  verify->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--samples", samples, "Random probes per suite");

  auto* bench = cli.add_subcommand("bench", "Replay a scroll script and report errors");
  bench->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--script", script_path, "Script file (default: built-in)")
      ->check(CLI::ExistingFile);
  bench->add_option("--seed", seed, "Random seed");
  bench->add_flag("--json", json, "JSON report");

  std::string mode = "uniform";
  std::size_t rows = 10000;
  std::string out_dir = ".";
  std::string csv_path;
  auto* gen = cli.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--mode", mode, "uniform | clustered | composite");
  gen->add_option("--rows", rows, "Row count");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_dir, "Directory for data.csv, rules and vscroll.conf");
  gen->add_option("--csv", csv_path, "Write only the CSV to this path ('-' for stdout)");

  bool warmup = false;
  std::string sql_keys;
  auto* inspect = cli.add_subcommand("inspect", "Dump the interpolation table or render SQL");
  inspect->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  inspect->add_flag("--warmup", warmup, "Run warmup before dumping");
  inspect->add_option("--sql", sql_keys, "Render the queries for a key given as v1|v2|...");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (*serve) return Serve(config_path, listen);
    if (*verify) return Verify(config_path, seed, samples);
    if (*bench) return Bench(config_path, script_path, seed, json);
    if (*gen) return Gen(mode, rows, seed, out_dir, csv_path);
    if (*inspect) return Inspect(config_path, warmup, sql_keys);
  } catch (const std::exception& e) {
    std::cerr << "vscroll: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
