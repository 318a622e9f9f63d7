#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vscroll/app/config.hpp"
#include "vscroll/dataset.hpp"

namespace vscroll::app {

enum class GenMode {
  // Distinct int32 keys spread over the whole range.
  kUniform,
  // Cyrillic street-like names whose letters follow a Zipf law, so rows pile
  // up in a few narrow ordinal ranges.
  kClustered,
  // (city, house) pairs: a clustered string plus an int32.
  kComposite,
};

std::string_view GenModeName(GenMode mode);
// Throws Error(kConfigError).
GenMode ParseGenMode(std::string_view name);

struct GenParams {
  GenMode mode = GenMode::kUniform;
  std::size_t rows = 10000;
  std::uint64_t seed = 1;
};

// File name the rule text is written under by WriteBundle.
inline constexpr char kRulesFileName[] = "cyrillic.rules";

// Collation rules for the generated strings: space, hyphen, digits and the
// Russian alphabet with ё as an accent variant of е.
std::string_view CyrillicRules();

struct GeneratedData {
  // String fields refer to kRulesFileName.
  std::vector<FieldSpec> fields;
  std::vector<std::string> payload_columns;
  // Generation order (not sorted).
  std::vector<Row> rows;
  std::shared_ptr<const CollationRules> rules;

  KeySchema schema() const;
};

// Deterministic for a given seed on every platform: draws come straight from
// a 64-bit Mersenne Twister without library distributions.
GeneratedData Generate(const GenParams& params);

void WriteCsv(const GeneratedData& data, std::ostream& out);

// Writes data.csv, the rule file and vscroll.conf into dir (created if
// needed). Returns the config path.
std::filesystem::path WriteBundle(const GeneratedData& data, const std::filesystem::path& dir);

// Sorted in-memory table straight from generated rows.
std::shared_ptr<IndexedTable> BuildTable(const GeneratedData& data);

}  // namespace vscroll::app
