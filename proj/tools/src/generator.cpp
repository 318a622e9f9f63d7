#include "vscroll/app/generator.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_set>

#include "vscroll/csv.hpp"
#include "vscroll/error.hpp"
#include "vscroll/utf8.hpp"

namespace vscroll::app {
namespace {

constexpr std::string_view kRules =
    " <-<0<1<2<3<4<5<6<7<8<9"
    "<а,А<б,Б<в,В<г,Г<д,Д<е,Е;ё,Ё<ж,Ж<з,З<и,И<й,Й<к,К<л,Л<м,М<н,Н<о,О<п,П"
    "<р,Р<с,С<т,Т<у,У<ф,Ф<х,Х<ц,Ц<ч,Ч<ш,Ш<щ,Щ<ъ,Ъ<ы,Ы<ь,Ь<э,Э<ю,Ю<я,Я";

constexpr std::u32string_view kLower = U"абвгдеёжзийклмнопрстуфхцчшщъыьэюя";
constexpr std::u32string_view kUpper = U"АБВГДЕЁЖЗИЙКЛМНОПРСТУФХЦЧШЩЪЫЬЭЮЯ";
constexpr std::uint32_t kNameMaxLength = 32;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Below(std::uint64_t n) { return engine_() % n; }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t Bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Zipf(s) over n ranks through a fixed, seed-shuffled rank order.
class Zipf {
 public:
  Zipf(std::size_t n, double s, Rng& rng) : order_(n), cumulative_(n) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cumulative_[i] = total;
      order_[i] = i;
    }
    for (double& c : cumulative_) c /= total;
    for (std::size_t i = n; i > 1; --i) std::swap(order_[i - 1], order_[rng.Below(i)]);
  }

  std::size_t Draw(Rng& rng) const {
    const double u = rng.Unit();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return order_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> cumulative_;
};

// Names like "Зелёная" or "Зелёная 12-я": first two letters Zipf-distributed,
// the rest uniform.
class NameSource {
 public:
  explicit NameSource(Rng& rng)
      : first_(kUpper.size(), 1.3, rng), second_(kLower.size(), 1.1, rng) {}

  std::string Draw(Rng& rng) const {
    std::u32string name;
    name += kUpper[first_.Draw(rng)];
    name += kLower[second_.Draw(rng)];
    const std::size_t tail = 3 + rng.Below(8);
    for (std::size_t i = 0; i < tail; ++i) name += kLower[rng.Below(kLower.size())];
    if (rng.Below(4) == 0) {
      name += U' ';
      for (char c : std::to_string(1 + rng.Below(30))) name += static_cast<char32_t>(c);
      name += U"-я";
    }
    return utf8::Encode(name);
  }

 private:
  Zipf first_;
  Zipf second_;
};

std::vector<Row> GenerateUniform(std::size_t n, Rng& rng) {
  std::unordered_set<std::int32_t> seen;
  std::vector<Row> rows;
  rows.reserve(n);
  while (rows.size() < n) {
    const auto key = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.Bits() >> 32));
    if (!seen.insert(key).second) continue;
    rows.push_back({{key}, {std::to_string(rows.size() + 1)}});
  }
  return rows;
}

std::vector<Row> GenerateClustered(std::size_t n, Rng& rng) {
  const NameSource names(rng);
  std::unordered_set<std::string> seen;
  std::vector<Row> rows;
  rows.reserve(n);
  while (rows.size() < n) {
    std::string name = names.Draw(rng);
    if (!seen.insert(name).second) continue;
    rows.push_back({{std::move(name)}, {std::to_string(rows.size() + 1)}});
  }
  return rows;
}

std::vector<Row> GenerateComposite(std::size_t n, Rng& rng) {
  const NameSource names(rng);
  // A pool of cities with Zipf-sized populations.
  const std::size_t city_count = std::max<std::size_t>(8, n / 200);
  std::vector<std::string> cities;
  std::unordered_set<std::string> seen_cities;
  while (cities.size() < city_count) {
    std::string city = names.Draw(rng);
    if (seen_cities.insert(city).second) cities.push_back(std::move(city));
  }
  const Zipf city_pick(city_count, 1.0, rng);
  std::set<std::pair<std::size_t, std::int32_t>> seen;
  std::vector<Row> rows;
  rows.reserve(n);
  while (rows.size() < n) {
    const std::size_t city = city_pick.Draw(rng);
    const auto house = static_cast<std::int32_t>(1 + rng.Below(5000));
    if (!seen.emplace(city, house).second) continue;
    rows.push_back({{cities[city], house}, {std::to_string(rows.size() + 1)}});
  }
  return rows;
}

}  // namespace

std::string_view GenModeName(GenMode mode) {
  switch (mode) {
    case GenMode::kUniform: return "uniform";
    case GenMode::kClustered: return "clustered";
    case GenMode::kComposite: return "composite";
  }
  return "?";
}

GenMode ParseGenMode(std::string_view name) {
  for (GenMode mode : {GenMode::kUniform, GenMode::kClustered, GenMode::kComposite}) {
    if (GenModeName(mode) == name) return mode;
  }
  throw Error(ErrorCode::kConfigError, "unknown generator mode '" + std::string(name) + "'");
}

std::string_view CyrillicRules() { return kRules; }

KeySchema GeneratedData::schema() const {
  std::vector<FieldDescriptor> descriptors;
  for (const FieldSpec& spec : fields) {
    descriptors.push_back({spec.name, spec.kind, spec.max_length,
                           spec.kind == FieldKind::kString ? rules : nullptr});
  }
  return KeySchema(std::move(descriptors));
}

GeneratedData Generate(const GenParams& params) {
  Rng rng(params.seed);
  GeneratedData data;
  data.payload_columns = {"code"};
  switch (params.mode) {
    case GenMode::kUniform:
      data.fields = {{"id", FieldKind::kInt32, 0, {}}};
      data.rows = GenerateUniform(params.rows, rng);
      break;
    case GenMode::kClustered:
      data.fields = {{"street", FieldKind::kString, kNameMaxLength, kRulesFileName}};
      data.rows = GenerateClustered(params.rows, rng);
      break;
    case GenMode::kComposite:
      data.fields = {{"city", FieldKind::kString, kNameMaxLength, kRulesFileName},
                     {"house", FieldKind::kInt32, 0, {}}};
      data.rows = GenerateComposite(params.rows, rng);
      break;
  }
  if (params.mode != GenMode::kUniform) {
    data.rules = std::make_shared<CollationRules>(CollationRules::Parse(kRules));
  }
  return data;
}

void WriteCsv(const GeneratedData& data, std::ostream& out) {
  std::vector<std::string> record;
  for (const FieldSpec& field : data.fields) record.push_back(field.name);
  record.insert(record.end(), data.payload_columns.begin(), data.payload_columns.end());
  csv::WriteRecord(out, record);
  for (const Row& row : data.rows) {
    record.clear();
    for (const FieldValue& value : row.key) record.push_back(FormatFieldValue(value));
    record.insert(record.end(), row.payload.begin(), row.payload.end());
    csv::WriteRecord(out, record);
  }
}

std::filesystem::path WriteBundle(const GeneratedData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + (dir / name).string());
    return out;
  };
  {
    std::ofstream out = open("data.csv");
    WriteCsv(data, out);
  }
  if (data.rules) {
    std::ofstream out = open(kRulesFileName);
    out << kRules << '\n';
  }
  std::ofstream out = open("vscroll.conf");
  out << "dataset = data.csv\n"
      << "table = data\n"
      << "fields = " << FormatFieldList(data.fields) << "\n"
      << "h = 20\n"
      << "slow_latency_ms = 0\n"
      << "listen = 127.0.0.1:8080\n"
      << "\n[warmup]\nthreshold = 0.2\nmax_iter = 64\n";
  return dir / "vscroll.conf";
}

std::shared_ptr<IndexedTable> BuildTable(const GeneratedData& data) {
  return std::make_shared<IndexedTable>(data.schema(), data.rows, data.payload_columns);
}

}  // namespace vscroll::app
