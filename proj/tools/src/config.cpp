#include "vscroll/app/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "vscroll/error.hpp"

namespace vscroll::app {
namespace {

namespace fs = std::filesystem;

std::string_view Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

// Strips a trailing comment unless it sits inside quotes.
std::string_view StripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
  }
  return line;
}

std::string Unquote(std::string_view value, std::size_t line_no) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return std::string(value.substr(1, value.size() - 2));
  }
  if (!value.empty() && value.front() == '"') {
    Fail("line " + std::to_string(line_no) + ": unterminated quote");
  }
  return std::string(value);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) Fail(key + ": '" + value + "' is not a number");
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  Fail(key + ": '" + value + "' is not a boolean");
}

fs::path Resolve(const fs::path& base_dir, const std::string& value) {
  const fs::path path(value);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

}  // namespace

std::vector<FieldSpec> ParseFieldList(std::string_view text, const fs::path& base_dir) {
  std::vector<FieldSpec> fields;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view entry =
        Trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    start = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (entry.empty()) Fail("fields: empty field entry");

    std::vector<std::string> parts;
    std::size_t p = 0;
    while (true) {
      const auto colon = entry.find(':', p);
      parts.emplace_back(Trim(entry.substr(p, colon == entry.npos ? entry.npos : colon - p)));
      if (colon == entry.npos) break;
      p = colon + 1;
    }
    FieldSpec spec;
    spec.name = parts[0];
    if (spec.name.empty() || parts.size() < 2) {
      Fail("fields: '" + std::string(entry) + "' must look like name:kind");
    }
    try {
      spec.kind = ParseFieldKind(parts[1]);
    } catch (const Error& e) {
      Fail("fields: " + std::string(e.what()));
    }
    if (spec.kind == FieldKind::kString) {
      if (parts.size() != 4) {
        Fail("fields: string field '" + spec.name + "' needs name:string:max_length:rules");
      }
      spec.max_length = ParseNumber<std::uint32_t>("fields", parts[2]);
      if (spec.max_length == 0) Fail("fields: max_length of '" + spec.name + "' must be positive");
      spec.rules = Resolve(base_dir, parts[3]);
    } else if (parts.size() != 2) {
      Fail("fields: only string fields take extra attributes ('" + spec.name + "')");
    }
    for (const FieldSpec& other : fields) {
      if (other.name == spec.name) Fail("fields: '" + spec.name + "' listed twice");
    }
    fields.push_back(std::move(spec));
  }
  return fields;
}

std::string FormatFieldList(const std::vector<FieldSpec>& fields) {
  std::string out;
  for (const FieldSpec& field : fields) {
    if (!out.empty()) out += ", ";
    out += field.name + ":" + std::string(FieldKindName(field.kind));
    if (field.kind == FieldKind::kString) {
      out += ":" + std::to_string(field.max_length) + ":" + field.rules.generic_string();
    }
  }
  return out;
}

std::pair<std::string, int> ParseListenAddress(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) Fail("listen: expected host:port");
  const int port = ParseNumber<int>("listen", std::string(text.substr(colon + 1)));
  if (port < 0 || port > 65535) Fail("listen: bad port");
  return {std::string(text.substr(0, colon)), port};
}

AppConfig ParseAppConfig(std::string_view text, const fs::path& base_dir) {
  std::map<std::string, std::string> values;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') Fail("line " + std::to_string(line_no) + ": bad section header");
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    if (key.empty()) Fail("line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (!values.emplace(key, Unquote(Trim(line.substr(eq + 1)), line_no)).second) {
      Fail("line " + std::to_string(line_no) + ": '" + key + "' set twice");
    }
  }

  AppConfig config;
  for (const auto& [key, value] : values) {
    if (key == "dataset") {
      config.dataset = Resolve(base_dir, value);
    } else if (key == "table") {
      config.table_name = value;
    } else if (key == "fields") {
      config.fields = ParseFieldList(value, base_dir);
    } else if (key == "h") {
      config.engine.h = ParseNumber<std::size_t>(key, value);
    } else if (key == "capacity") {
      config.engine.capacity = ParseNumber<std::size_t>(key, value);
    } else if (key == "page_size") {
      config.engine.page_size = ParseNumber<std::size_t>(key, value);
    } else if (key == "lambda_max_default") {
      config.engine.lambda_max_default = ParseNumber<RowIndex>(key, value);
    } else if (key == "warmup.threshold") {
      config.engine.threshold_fraction = ParseNumber<double>(key, value);
    } else if (key == "warmup.max_iter") {
      config.engine.max_iter = ParseNumber<int>(key, value);
    } else if (key == "warmup.auto") {
      config.engine.auto_warmup = ParseBool(key, value);
    } else if (key == "slow_latency_ms") {
      config.slow_latency = std::chrono::milliseconds(ParseNumber<std::int64_t>(key, value));
      if (config.slow_latency.count() < 0) Fail("slow_latency_ms must not be negative");
    } else if (key == "listen") {
      std::tie(config.listen_host, config.listen_port) = ParseListenAddress(value);
    } else {
      Fail("unknown key '" + key + "'");
    }
  }
  if (config.fields.empty()) Fail("'fields' is required");
  config.engine.Validate();
  return config;
}

AppConfig LoadAppConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseAppConfig(text.str(), path.parent_path());
}

KeySchema BuildSchema(const AppConfig& config) {
  std::map<fs::path, std::shared_ptr<const CollationRules>> loaded;
  std::vector<FieldDescriptor> descriptors;
  for (const FieldSpec& spec : config.fields) {
    FieldDescriptor field{spec.name, spec.kind, spec.max_length, nullptr};
    if (spec.kind == FieldKind::kString) {
      auto& rules = loaded[spec.rules];
      if (!rules) rules = std::make_shared<CollationRules>(CollationRules::Load(spec.rules));
      field.rules = rules;
    }
    descriptors.push_back(std::move(field));
  }
  return KeySchema(std::move(descriptors));
}

std::shared_ptr<IndexedTable> LoadTable(const AppConfig& config) {
  if (config.dataset.empty()) Fail("'dataset' is required");
  std::shared_ptr<IndexedTable> table = IngestCsv(config.dataset, BuildSchema(config));
  table->set_slow_latency(config.slow_latency);
  return table;
}

}  // namespace vscroll::app
