#include "vscroll/interpolator.hpp"

#include <algorithm>
#include <ostream>

#include "vscroll/error.hpp"

namespace vscroll {

namespace detail {
std::uint64_t& ProbeCounter() {
  thread_local std::uint64_t counter = 0;
  return counter;
}
}  // namespace detail

Ordinal InterpolateKappa(const InterpolationPoint& lo, const InterpolationPoint& hi,
                         RowIndex lambda) {
  if (lambda <= lo.lambda) return lo.kappa;
  if (lambda >= hi.lambda) return hi.kappa;
  // Segment-local k = (l - 1)(K - 1)/(L - 1) + 1 with l = lambda - lo,
  // L = hi - lo >= 2 here, K = kappa span.
  const Ordinal local_lambda = lambda - lo.lambda;
  const Ordinal kappa_span = hi.kappa - lo.kappa;
  const Ordinal numerator = (local_lambda - 1) * (kappa_span - 1);
  const Ordinal denominator = hi.lambda - lo.lambda - 1;
  Ordinal offset = RoundHalfUp(numerator, denominator) + 1;
  offset = std::clamp<Ordinal>(offset, 1, kappa_span);
  return lo.kappa + offset;
}

RowIndex InterpolateLambda(const InterpolationPoint& lo, const InterpolationPoint& hi,
                           const Ordinal& kappa) {
  if (kappa <= lo.kappa) return lo.lambda;
  if (kappa >= hi.kappa) return hi.lambda;
  // kappa_span >= 2 here because lo.kappa < kappa < hi.kappa.
  const Ordinal local_kappa = kappa - lo.kappa;
  const Ordinal kappa_span = hi.kappa - lo.kappa;
  const RowIndex lambda_span = hi.lambda - lo.lambda;
  const Ordinal numerator = Ordinal(lambda_span - 1) * (local_kappa - 1);
  Ordinal offset = RoundHalfUp(numerator, kappa_span - 1) + 1;
  offset = std::clamp<Ordinal>(offset, 1, lambda_span);
  return lo.lambda + offset.convert_to<RowIndex>();
}

InterpolationTable::InterpolationTable(Ordinal kappa_min, Ordinal kappa_max,
                                       RowIndex lambda_max, std::size_t capacity)
    : kappa_min_(std::move(kappa_min)),
      kappa_max_(std::move(kappa_max)),
      lambda_max_(lambda_max),
      capacity_(capacity) {
  if (kappa_min_ >= kappa_max_) {
    throw Error(ErrorCode::kEmptyDomain, "kappa_min must be below kappa_max");
  }
  if (lambda_max_ < 1) {
    throw Error(ErrorCode::kRangeError, "lambda_max must be at least 1");
  }
  if (capacity_ < 2) {
    throw Error(ErrorCode::kRangeError, "capacity must hold both endpoints");
  }
  by_lambda_.emplace(0, Entry{kappa_min_, 0});
  by_lambda_.emplace(lambda_max_, Entry{kappa_max_, 0});
  by_kappa_.emplace(kappa_min_, 0);
  by_kappa_.emplace(kappa_max_, lambda_max_);
}

Ordinal InterpolationTable::KappaFor(RowIndex lambda) const {
  lambda = std::clamp<RowIndex>(lambda, 0, lambda_max_);
  auto hi = by_lambda_.lower_bound(lambda);
  if (hi->first == lambda) return hi->second.kappa;
  auto lo = std::prev(hi);
  return InterpolateKappa({lo->first, lo->second.kappa}, {hi->first, hi->second.kappa},
                          lambda);
}

RowIndex InterpolationTable::LambdaFor(const Ordinal& kappa) const {
  if (kappa <= kappa_min_) return 0;
  if (kappa >= kappa_max_) return lambda_max_;
  auto hi = by_kappa_.lower_bound(kappa);
  if (hi->first == kappa) return hi->second;
  auto lo = std::prev(hi);
  return InterpolateLambda({lo->second, lo->first}, {hi->second, hi->first}, kappa);
}

void InterpolationTable::Erase(LambdaMap::iterator it) {
  eviction_queue_.erase({it->second.redundancy, it->first});
  by_kappa_.erase(it->second.kappa);
  by_lambda_.erase(it);
}

void InterpolationTable::Refresh(LambdaMap::iterator it) {
  if (it == by_lambda_.begin() || std::next(it) == by_lambda_.end()) return;
  eviction_queue_.erase({it->second.redundancy, it->first});
  const auto lo = std::prev(it);
  const auto hi = std::next(it);
  const Ordinal estimate = InterpolateKappa({lo->first, lo->second.kappa},
                                            {hi->first, hi->second.kappa}, it->first);
  it->second.redundancy = abs(it->second.kappa - estimate);
  eviction_queue_.emplace(it->second.redundancy, it->first);
}

void InterpolationTable::RefreshAround(RowIndex lambda) {
  auto it = by_lambda_.lower_bound(lambda);
  if (it != by_lambda_.end()) Refresh(it);
  if (it != by_lambda_.begin()) Refresh(std::prev(it));
  if (it != by_lambda_.end() && it->first == lambda && std::next(it) != by_lambda_.end()) {
    Refresh(std::next(it));
  }
}

void InterpolationTable::EvictIfNeeded(EditSummary& summary) {
  while (by_lambda_.size() > capacity_ && !eviction_queue_.empty()) {
    const RowIndex victim = eviction_queue_.begin()->second;
    Erase(by_lambda_.find(victim));
    summary.evicted.push_back(victim);
    RefreshAround(victim);
  }
}

EditSummary InterpolationTable::Insert(RowIndex lambda, const Ordinal& kappa) {
  if (lambda <= 0 || lambda >= lambda_max_) {
    throw Error(ErrorCode::kRangeError, "lambda " + std::to_string(lambda) +
                                            " outside (0, " + std::to_string(lambda_max_) +
                                            ")");
  }
  if (kappa <= kappa_min_ || kappa >= kappa_max_) {
    throw Error(ErrorCode::kStaleEndpointConflict,
                "kappa " + kappa.str() + " is not strictly inside the endpoint range");
  }

  EditSummary summary;
  if (auto same = by_lambda_.find(lambda); same != by_lambda_.end()) {
    summary.replaced = same->second.kappa != kappa;
    Erase(same);
  }

  // Stale points to the left hold kappa' >= kappa, to the right kappa' <= kappa.
  // The endpoints never qualify thanks to the range check above.
  auto right = by_lambda_.lower_bound(lambda);
  while (right->second.kappa <= kappa) {
    summary.removed.push_back(right->first);
    auto next = std::next(right);
    Erase(right);
    right = next;
  }
  for (auto left = std::prev(right); left->second.kappa >= kappa;) {
    summary.removed.push_back(left->first);
    auto prev = std::prev(left);
    Erase(left);
    left = prev;
  }
  std::sort(summary.removed.begin(), summary.removed.end());

  // Another row may already claim the same ordinal only if it was stale, and
  // that row has just been removed by the sweeps above.
  auto inserted = by_lambda_.emplace_hint(right, lambda, Entry{kappa, 0});
  by_kappa_.emplace(kappa, lambda);
  Refresh(inserted);
  Refresh(std::prev(inserted));
  Refresh(std::next(inserted));

  EvictIfNeeded(summary);
  summary.generation = ++generation_;
  return summary;
}

void InterpolationTable::SetLambdaMax(RowIndex lambda_max) {
  if (lambda_max < 1) {
    throw Error(ErrorCode::kRangeError, "lambda_max must be at least 1");
  }
  if (lambda_max == lambda_max_) return;

  Erase(std::prev(by_lambda_.end()));
  while (std::prev(by_lambda_.end())->first >= lambda_max) {
    Erase(std::prev(by_lambda_.end()));
  }
  lambda_max_ = lambda_max;
  by_lambda_.emplace(lambda_max_, Entry{kappa_max_, 0});
  by_kappa_.emplace(kappa_max_, lambda_max_);
  Refresh(std::prev(std::prev(by_lambda_.end())));
  ++generation_;
}

std::pair<RowIndex, RowIndex> InterpolationTable::LargestGap() const {
  std::pair<RowIndex, RowIndex> best{0, lambda_max_};
  RowIndex best_width = -1;
  for (auto it = by_lambda_.begin(), next = std::next(it); next != by_lambda_.end();
       ++it, ++next) {
    const RowIndex width = next->first - it->first;
    if (width > best_width) {
      best_width = width;
      best = {it->first, next->first};
    }
  }
  return best;
}

std::vector<InterpolationPoint> InterpolationTable::Points() const {
  std::vector<InterpolationPoint> out;
  out.reserve(by_lambda_.size());
  for (const auto& [lambda, entry] : by_lambda_) out.push_back({lambda, entry.kappa});
  return out;
}

void InterpolationTable::Dump(std::ostream& out) const {
  for (const auto& [lambda, entry] : by_lambda_) {
    out << lambda << ' ' << entry.kappa.str() << '\n';
  }
}

}  // namespace vscroll
