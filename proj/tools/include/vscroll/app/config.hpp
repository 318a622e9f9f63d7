#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vscroll/dataset.hpp"
#include "vscroll/engine.hpp"

namespace vscroll::app {

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::kInt32;
  std::uint32_t max_length = 0;
  // Rule file for string fields, already resolved against the config's directory.
  std::filesystem::path rules;
};

struct AppConfig {
  std::filesystem::path dataset;
  // Table name used when rendering SQL.
  std::string table_name = "data";
  std::vector<FieldSpec> fields;
  EngineConfig engine;
  std::chrono::milliseconds slow_latency{0};
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
};

// Line-oriented key = value text with optional [section] headers; a key inside
// a section is looked up as "section.key". '#' and ';' start comments, values
// may be double-quoted. Relative paths resolve against base_dir.
//
//   dataset = streets.csv
//   fields  = street:string:24:cyrillic.rules, house:int32
//   h = 20
//   [warmup]
//   threshold = 0.2
//   max_iter = 64
//
// Throws Error(kConfigError).
AppConfig ParseAppConfig(std::string_view text, const std::filesystem::path& base_dir);
AppConfig LoadAppConfig(const std::filesystem::path& path);

// "name:kind[:max_length:rules]" entries separated by commas.
std::vector<FieldSpec> ParseFieldList(std::string_view text,
                                      const std::filesystem::path& base_dir);
std::string FormatFieldList(const std::vector<FieldSpec>& fields);

// "host:port". Throws Error(kConfigError).
std::pair<std::string, int> ParseListenAddress(std::string_view text);

// Loads each distinct rule file once. Throws the rule parser's errors.
KeySchema BuildSchema(const AppConfig& config);

// Ingests the dataset and applies the latency injection.
std::shared_ptr<IndexedTable> LoadTable(const AppConfig& config);

}  // namespace vscroll::app
