#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vscroll/ordinal.hpp"

namespace vscroll {

struct InterpolationPoint {
  RowIndex lambda = 0;
  Ordinal kappa;

  friend bool operator==(const InterpolationPoint&, const InterpolationPoint&) = default;
};

struct EditSummary {
  // Rows whose stale points were dropped to keep the map monotone.
  std::vector<RowIndex> removed;
  // Rows dropped by the capacity policy.
  std::vector<RowIndex> evicted;
  bool replaced = false;
  std::uint64_t generation = 0;
};

namespace detail {
// Per-thread count of key comparisons performed inside interpolation tables.
std::uint64_t& ProbeCounter();

template <typename T>
struct CountingLess {
  bool operator()(const T& a, const T& b) const {
    ++ProbeCounter();
    return a < b;
  }
};
}  // namespace detail

// Monotone partial map between row numbers (lambda) and key ordinals (kappa).
//
// Both endpoints 0 -> kappa_min and lambda_max -> kappa_max are always stored.
// Between stored points the hypergeometric mean estimate is used in both
// directions; lookups bisect the point set, so they cost O(log points).
//
// Not synchronized: the owner serializes writers against readers.
class InterpolationTable {
 public:
  static constexpr RowIndex kDefaultLambdaMax = 1000;
  static constexpr std::size_t kDefaultCapacity = 4096;

  // Throws Error(kEmptyDomain) when kappa_min >= kappa_max, Error(kRangeError)
  // when lambda_max < 1 or capacity < 2.
  InterpolationTable(Ordinal kappa_min, Ordinal kappa_max,
                     RowIndex lambda_max = kDefaultLambdaMax,
                     std::size_t capacity = kDefaultCapacity);

  RowIndex lambda_max() const { return lambda_max_; }
  const Ordinal& kappa_min() const { return kappa_min_; }
  const Ordinal& kappa_max() const { return kappa_max_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return by_lambda_.size(); }
  std::uint64_t generation() const { return generation_; }

  // lambda is clamped to [0, lambda_max]. The result lies in the bracketing
  // segment (kappa_lo, kappa_hi].
  Ordinal KappaFor(RowIndex lambda) const;

  // kappa is clamped to [kappa_min, kappa_max]. Returns 0 iff kappa <= kappa_min.
  RowIndex LambdaFor(const Ordinal& kappa) const;

  // Adds an exact observation 0 < lambda < lambda_max. The newest point wins:
  // stored points on the left with kappa' >= kappa and on the right with
  // kappa' <= kappa are dropped. Throws Error(kRangeError) for lambda outside
  // the open range and Error(kStaleEndpointConflict) when kappa is not
  // strictly between the endpoint ordinals.
  EditSummary Insert(RowIndex lambda, const Ordinal& kappa);

  // Moves the upper endpoint to lambda_max and drops interior points at or
  // beyond it. No-op when unchanged.
  void SetLambdaMax(RowIndex lambda_max);

  // Adjacent stored pair with the widest lambda gap; ties go to the lower pair.
  std::pair<RowIndex, RowIndex> LargestGap() const;

  std::vector<InterpolationPoint> Points() const;

  // One "lambda kappa" line per stored point, in lambda order.
  void Dump(std::ostream& out) const;

  // Per-thread comparison counter used to check the logarithmic lookup cost.
  static std::uint64_t ProbeCount() { return detail::ProbeCounter(); }

 private:
  struct Entry {
    Ordinal kappa;
    Ordinal redundancy;  // distance from the neighbors' interpolation
  };
  using LambdaMap = std::map<RowIndex, Entry, detail::CountingLess<RowIndex>>;
  using KappaMap = std::map<Ordinal, RowIndex, detail::CountingLess<Ordinal>>;

  void Erase(LambdaMap::iterator it);
  void Refresh(LambdaMap::iterator it);
  void RefreshAround(RowIndex lambda);
  void EvictIfNeeded(EditSummary& summary);

  Ordinal kappa_min_;
  Ordinal kappa_max_;
  RowIndex lambda_max_;
  std::size_t capacity_;
  std::uint64_t generation_ = 0;
  LambdaMap by_lambda_;
  KappaMap by_kappa_;
  std::set<std::pair<Ordinal, RowIndex>> eviction_queue_;
};

// Mean-estimate interpolation inside one segment; shared with tests and tools.
Ordinal InterpolateKappa(const InterpolationPoint& lo, const InterpolationPoint& hi,
                         RowIndex lambda);
RowIndex InterpolateLambda(const InterpolationPoint& lo, const InterpolationPoint& hi,
                           const Ordinal& kappa);

}  // namespace vscroll
