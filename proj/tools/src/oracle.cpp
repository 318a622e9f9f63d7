#include "vscroll/app/oracle.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>

namespace vscroll::app {
namespace {

// IEEE-754 totalOrder: -NaN < -inf < ... < -0 < +0 < ... < +inf < +NaN.
std::uint64_t TotalOrderKey(double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  return (bits >> 63) ? ~bits : bits | (std::uint64_t{1} << 63);
}

}  // namespace

std::weak_ordering CompareKeys(const KeySchema& schema, const KeyTuple& lhs, const KeyTuple& rhs) {
  for (std::size_t i = 0; i < schema.arity(); ++i) {
    const FieldDescriptor& field = schema.fields()[i];
    const std::weak_ordering order = std::visit(
        [&](const auto& a) -> std::weak_ordering {
          using T = std::decay_t<decltype(a)>;
          const T& b = std::get<T>(rhs[i]);
          if constexpr (std::is_same_v<T, std::string>) {
            return field.rules->compare(a, b, true, true);
          } else if constexpr (std::is_same_v<T, double>) {
            return TotalOrderKey(a) <=> TotalOrderKey(b);
          } else {
            return a <=> b;
          }
        },
        lhs[i]);
    if (order != 0) return order;
  }
  return std::weak_ordering::equivalent;
}

RowIndex OraclePosition(const IndexedTable& table, const KeyTuple& key) {
  std::size_t lo = 0;
  std::size_t hi = table.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (CompareKeys(table.schema(), table.row_at(mid).key, key) < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return static_cast<RowIndex>(lo);
}

}  // namespace vscroll::app
