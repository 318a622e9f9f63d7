#pragma once

#include <compare>

#include "vscroll/dataset.hpp"

namespace vscroll::app {

// Key order computed from the field values alone, without the numerators:
// strings by the three-pass collation comparison, doubles by IEEE total order,
// everything else by value. Used to cross-check the index.
std::weak_ordering CompareKeys(const KeySchema& schema, const KeyTuple& lhs, const KeyTuple& rhs);

// Number of rows whose key orders before `key`, by bisection with CompareKeys
// over the table's rows. Only meaningful once the row order has been checked.
RowIndex OraclePosition(const IndexedTable& table, const KeyTuple& key);

}  // namespace vscroll::app
