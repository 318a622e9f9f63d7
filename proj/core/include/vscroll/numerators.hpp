#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vscroll/collation.hpp"
#include "vscroll/field.hpp"
#include "vscroll/ordinal.hpp"

namespace vscroll {

// Number of strings of length at most `max_length` over an alphabet of
// `alphabet` letters: (a^(m+1) - 1) / (a - 1), or m + 1 for a unary alphabet.
Ordinal StringCount(std::uint32_t alphabet, std::uint32_t max_length);

// Order isomorphism between strings of length <= m over {0..a-1} (plain
// lexicographic order, a prefix sorts first) and [0, StringCount(a, m)).
class PlainStringCodec {
 public:
  PlainStringCodec(std::uint32_t alphabet, std::uint32_t max_length);

  std::uint32_t alphabet() const { return alphabet_; }
  std::uint32_t max_length() const { return max_length_; }
  const Ordinal& cardinality() const { return cardinality_; }
  // Weight of position i: the number of strings of length <= m - i - 1.
  const std::vector<Ordinal>& weights() const { return weights_; }

  // Throws Error(kLengthExceeded) or Error(kOutOfRange) for a digit >= a.
  Ordinal Encode(std::span<const std::uint32_t> digits) const;
  // Throws Error(kOutOfRange) for ordinals >= cardinality.
  std::vector<std::uint32_t> Decode(Ordinal ordinal) const;

 private:
  std::uint32_t alphabet_;
  std::uint32_t max_length_;
  std::vector<Ordinal> weights_;
  Ordinal cardinality_;
};

// Strings ordered by collation rules with accent and case sensitivity: letter
// sequence first, accent variant vector second, case vector last. The ordinal
// is (k0 * a1^m + k1) * a2^m + k2 where k0 is the plain ordinal of the letter
// sequence and k1, k2 are the variant and case digits read as base-a1 and
// base-a2 numbers of m digits, most significant first.
//
// Because a1 and a2 are maxima over letters, some ordinals name no string
// (a digit beyond the letter's own variant or case count). Decode rejects
// those; ClampDown maps them to the greatest valid ordinal below.
class CollatedStringCodec {
 public:
  CollatedStringCodec(std::shared_ptr<const CollationRules> rules, std::uint32_t max_length);

  const CollationRules& rules() const { return *rules_; }
  std::shared_ptr<const CollationRules> shared_rules() const { return rules_; }
  std::uint32_t max_length() const { return plain_.max_length(); }
  const Ordinal& cardinality() const { return cardinality_; }

  Ordinal Encode(std::u32string_view text) const;
  Ordinal Encode(std::string_view utf8_text) const;

  std::u32string Decode(const Ordinal& ordinal) const;
  std::string DecodeUtf8(const Ordinal& ordinal) const;

  bool IsValid(const Ordinal& ordinal) const;
  // Greatest valid ordinal <= `ordinal` (which must be < cardinality).
  Ordinal ClampDown(const Ordinal& ordinal) const;

 private:
  struct Digits {
    std::vector<std::uint32_t> primaries;
    std::vector<std::uint32_t> variants;  // m digits
    std::vector<std::uint32_t> cases;     // m digits
  };

  Digits Split(const Ordinal& ordinal) const;
  Ordinal Join(const Digits& digits) const;
  Ordinal PackDigits(std::span<const std::uint32_t> digits, std::uint32_t base) const;
  std::vector<std::uint32_t> UnpackDigits(Ordinal packed, std::uint32_t base) const;

  std::shared_ptr<const CollationRules> rules_;
  PlainStringCodec plain_;
  Ordinal variant_span_;  // a1^m
  Ordinal case_span_;     // a2^m
  Ordinal cardinality_;
};

// Order isomorphism between one field's values and [0, cardinality).
class ScalarCodec {
 public:
  static ScalarCodec Bit();
  static ScalarCodec Int32();
  static ScalarCodec Int64();
  static ScalarCodec Float64();
  static ScalarCodec DateTimeMillis();
  static ScalarCodec String(std::shared_ptr<const CollationRules> rules,
                            std::uint32_t max_length);

  FieldKind kind() const { return kind_; }
  const Ordinal& cardinality() const { return cardinality_; }
  // Present only for string fields.
  const CollatedStringCodec* string_codec() const { return string_.get(); }

  // Throws Error(kSchemaError) if the value's kind does not match, and
  // kLengthExceeded / kUnknownChar for strings.
  Ordinal Encode(const FieldValue& value) const;
  // Throws Error(kOutOfRange), or kNoSuchSlot for a string gap ordinal.
  FieldValue Decode(const Ordinal& ordinal) const;

  bool IsValid(const Ordinal& ordinal) const;
  Ordinal ClampDown(const Ordinal& ordinal) const;
  // Largest ordinal that decodes.
  Ordinal MaxValid() const;

 private:
  ScalarCodec(FieldKind kind, Ordinal cardinality) : kind_(kind), cardinality_(std::move(cardinality)) {}

  FieldKind kind_;
  Ordinal cardinality_;
  std::shared_ptr<const CollatedStringCodec> string_;
};

// Lexicographic order isomorphism for a tuple of fields; the first field is
// the most significant, matching the ORDER BY column order.
class CompositeCodec {
 public:
  explicit CompositeCodec(std::vector<ScalarCodec> fields);

  const std::vector<ScalarCodec>& fields() const { return fields_; }
  std::size_t arity() const { return fields_.size(); }
  const Ordinal& cardinality() const { return cardinality_; }

  // Horner evaluation over per-field ordinals, n - 1 multiplications.
  Ordinal Combine(std::span<const Ordinal> field_ordinals) const;
  // Right-to-left div/mod split. Throws Error(kOutOfRange).
  std::vector<Ordinal> Split(Ordinal ordinal) const;

  // Field errors are rethrown with the field index in the message.
  Ordinal Encode(const KeyTuple& values) const;
  KeyTuple Decode(const Ordinal& ordinal) const;

  bool IsValid(const Ordinal& ordinal) const;
  // Greatest valid ordinal <= `ordinal`.
  Ordinal ClampDown(const Ordinal& ordinal) const;
  // Decode after ClampDown; never throws kNoSuchSlot.
  KeyTuple DecodeClamped(const Ordinal& ordinal) const;

 private:
  std::vector<ScalarCodec> fields_;
  Ordinal cardinality_;
};

}  // namespace vscroll
