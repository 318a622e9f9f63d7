#pragma once

#include "vscroll/ordinal.hpp"

namespace vscroll {

// Exact combinatorial model of the key -> row-number function on one segment.
//
// Records 0..lambda_max sit on distinct integer keys; record 0 is at k_min and
// record lambda_max at k_max. Every placement of the lambda_max - 1 inner
// records on the k_max - k_min - 1 inner keys is taken as equally likely, and
// f(k) counts the records with key strictly below k. For a fixed k, f(k) - 1
// is hypergeometric.
//
// All arithmetic is exact; rounding belongs to the interpolator.
struct SegmentModel {
  Ordinal k_min;
  Ordinal k_max;
  Ordinal lambda_max;

  // Throws Error(kEmptyDomain) unless k_max > k_min and
  // 1 <= lambda_max <= k_max - k_min.
  void Validate() const;
};

Ordinal Binomial(const Ordinal& n, const Ordinal& k);

// Number of admissible functions f on the segment.
Ordinal TotalFunctions(const SegmentModel& model);

// Number of admissible f with f(k) = lambda, for k_min < k <= k_max.
Ordinal FunctionsThrough(const SegmentModel& model, const Ordinal& key, const Ordinal& lambda);

// Mean of f(key); 0 at k_min.
Rational ExpectedLambda(const SegmentModel& model, const Ordinal& key);

// Variance of f(key) for k_min < key <= k_max; vanishes at both ends.
Rational VarianceLambda(const SegmentModel& model, const Ordinal& key);

// Inverse of ExpectedLambda on the open segment; lambda = 0 maps to k_min.
// With lambda_max = 1 the only inner record position is k_max.
Rational ExpectedKey(const SegmentModel& model, const Ordinal& lambda);

}  // namespace vscroll
