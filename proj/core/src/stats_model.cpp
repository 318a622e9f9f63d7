#include "vscroll/stats_model.hpp"

#include "vscroll/error.hpp"

namespace vscroll {

void SegmentModel::Validate() const {
  if (k_max <= k_min) {
    throw Error(ErrorCode::kEmptyDomain, "k_max must exceed k_min");
  }
  if (lambda_max < 1 || lambda_max > k_max - k_min) {
    throw Error(ErrorCode::kEmptyDomain,
                "lambda_max " + lambda_max.str() + " must lie in [1, k_max - k_min]");
  }
}

Ordinal Binomial(const Ordinal& n, const Ordinal& k) {
  if (k < 0 || n < 0 || k > n) return 0;
  const Ordinal r = k > n - k ? n - k : k;
  Ordinal result = 1;
  for (Ordinal i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

Ordinal TotalFunctions(const SegmentModel& model) {
  return Binomial(model.k_max - model.k_min - 1, model.lambda_max - 1);
}

Ordinal FunctionsThrough(const SegmentModel& model, const Ordinal& key,
                         const Ordinal& lambda) {
  if (key <= model.k_min || key > model.k_max) return 0;
  // Inner records below the key, times inner records at or above it. The
  // second factor counts the k_max - key keys in [key, k_max).
  return Binomial(key - model.k_min - 1, lambda - 1) *
         Binomial(model.k_max - key, model.lambda_max - lambda);
}

Rational ExpectedLambda(const SegmentModel& model, const Ordinal& key) {
  if (key <= model.k_min) return 0;
  const Ordinal inner = model.k_max - model.k_min - 1;
  if (inner == 0) return Rational(model.lambda_max);
  return Rational(model.lambda_max - 1) * Rational(key - model.k_min - 1) / Rational(inner) + 1;
}

Rational VarianceLambda(const SegmentModel& model, const Ordinal& key) {
  if (key <= model.k_min + 1 || key >= model.k_max) return 0;
  const Ordinal span = model.k_max - model.k_min;
  // Inner keys >= 2 here, because k_min + 1 < key < k_max.
  const Rational head = Rational((model.lambda_max - 1) * (key - model.k_min - 1) *
                                 (model.k_max - key)) /
                        Rational((span - 1) * (span - 1));
  return head * Rational(span - model.lambda_max) / Rational(span - 2);
}

Rational ExpectedKey(const SegmentModel& model, const Ordinal& lambda) {
  if (lambda <= 0) return Rational(model.k_min);
  if (model.lambda_max == 1) return Rational(model.k_max);
  return Rational((lambda - 1) * (model.k_max - model.k_min - 1)) /
             Rational(model.lambda_max - 1) +
         Rational(model.k_min + 1);
}

}  // namespace vscroll
