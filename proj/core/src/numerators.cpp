#include "vscroll/numerators.hpp"

#include <bit>
#include <limits>

#include "vscroll/error.hpp"
#include "vscroll/utf8.hpp"

namespace vscroll {

namespace {

const Ordinal kTwo32 = Ordinal(1) << 32;
const Ordinal kTwo64 = Ordinal(1) << 64;
constexpr std::uint64_t kSignBit = std::uint64_t{1} << 63;

[[noreturn]] void OutOfRange(const Ordinal& ordinal, const Ordinal& cardinality) {
  throw Error(ErrorCode::kOutOfRange,
              "ordinal " + ordinal.str() + " >= cardinality " + cardinality.str());
}

std::uint64_t ToU64(const Ordinal& value) { return value.convert_to<std::uint64_t>(); }

std::uint64_t DoubleImage(double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  return (bits & kSignBit) != 0 ? ~bits : (bits | kSignBit);
}

double DoubleFromImage(std::uint64_t image) {
  const std::uint64_t bits = (image & kSignBit) != 0 ? (image ^ kSignBit) : ~image;
  return std::bit_cast<double>(bits);
}

template <typename T>
const T& Expect(const FieldValue& value, FieldKind kind) {
  if (const T* v = std::get_if<T>(&value)) return *v;
  throw Error(ErrorCode::kSchemaError, "expected a " + std::string(FieldKindName(kind)) +
                                           " value, got " +
                                           std::string(FieldKindName(KindOf(value))));
}

}  // namespace

Ordinal StringCount(std::uint32_t alphabet, std::uint32_t max_length) {
  if (alphabet <= 1) return Ordinal(max_length) + 1;
  return (Pow(alphabet, max_length + 1) - 1) / (alphabet - 1);
}

// ---------------------------------------------------------------------------
// PlainStringCodec

PlainStringCodec::PlainStringCodec(std::uint32_t alphabet, std::uint32_t max_length)
    : alphabet_(alphabet), max_length_(max_length), weights_(max_length) {
  if (alphabet == 0) {
    throw Error(ErrorCode::kEmptyDomain, "alphabet must have at least one letter");
  }
  // weights_[i] = 1 + a + ... + a^(m-i-1), filled from the back as running
  // partial sums of the geometric series.
  Ordinal partial = 0;
  for (std::uint32_t i = max_length; i-- > 0;) {
    partial = partial * alphabet + 1;
    weights_[i] = partial;
  }
  cardinality_ = (max_length == 0 ? Ordinal(0) : weights_[0] * alphabet) + 1;
}

Ordinal PlainStringCodec::Encode(std::span<const std::uint32_t> digits) const {
  if (digits.size() > max_length_) {
    throw Error(ErrorCode::kLengthExceeded, "length " + std::to_string(digits.size()) +
                                                " exceeds " + std::to_string(max_length_));
  }
  Ordinal result = digits.size();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= alphabet_) {
      throw Error(ErrorCode::kOutOfRange, "digit " + std::to_string(digits[i]) +
                                              " outside alphabet of " +
                                              std::to_string(alphabet_));
    }
    if (digits[i] != 0) result += weights_[i] * digits[i];
  }
  return result;
}

std::vector<std::uint32_t> PlainStringCodec::Decode(Ordinal ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) OutOfRange(ordinal, cardinality_);
  std::vector<std::uint32_t> digits;
  for (std::uint32_t i = 0; i < max_length_ && ordinal > 0; ++i) {
    ordinal -= 1;
    Ordinal digit;
    boost::multiprecision::divide_qr(ordinal, weights_[i], digit, ordinal);
    digits.push_back(digit.convert_to<std::uint32_t>());
  }
  return digits;
}

// ---------------------------------------------------------------------------
// CollatedStringCodec

CollatedStringCodec::CollatedStringCodec(std::shared_ptr<const CollationRules> rules,
                                         std::uint32_t max_length)
    : rules_(std::move(rules)),
      plain_(rules_->primary_count(), max_length),
      variant_span_(Pow(rules_->max_variants(), max_length)),
      case_span_(Pow(rules_->max_cases(), max_length)),
      cardinality_(plain_.cardinality() * variant_span_ * case_span_) {}

Ordinal CollatedStringCodec::PackDigits(std::span<const std::uint32_t> digits,
                                        std::uint32_t base) const {
  Ordinal packed = 0;
  for (std::uint32_t i = 0; i < plain_.max_length(); ++i) {
    packed *= base;
    if (i < digits.size()) packed += digits[i];
  }
  return packed;
}

std::vector<std::uint32_t> CollatedStringCodec::UnpackDigits(Ordinal packed,
                                                             std::uint32_t base) const {
  std::vector<std::uint32_t> digits(plain_.max_length());
  Ordinal digit;
  for (std::uint32_t i = plain_.max_length(); i-- > 0;) {
    boost::multiprecision::divide_qr(packed, Ordinal(base), packed, digit);
    digits[i] = digit.convert_to<std::uint32_t>();
  }
  return digits;
}

Ordinal CollatedStringCodec::Encode(std::u32string_view text) const {
  if (text.size() > plain_.max_length()) {
    throw Error(ErrorCode::kLengthExceeded,
                "string of length " + std::to_string(text.size()) + " exceeds " +
                    std::to_string(plain_.max_length()));
  }
  Digits digits;
  digits.primaries.reserve(text.size());
  digits.variants.reserve(text.size());
  digits.cases.reserve(text.size());
  for (char32_t ch : text) {
    const CharComponents comp = rules_->components_of(ch);
    digits.primaries.push_back(comp.primary);
    digits.variants.push_back(comp.variant);
    digits.cases.push_back(comp.case_form);
  }
  return Join(digits);
}

Ordinal CollatedStringCodec::Encode(std::string_view utf8_text) const {
  return Encode(utf8::Decode(utf8_text));
}

Ordinal CollatedStringCodec::Join(const Digits& digits) const {
  const Ordinal k0 = plain_.Encode(digits.primaries);
  const Ordinal k1 = PackDigits(digits.variants, rules_->max_variants());
  const Ordinal k2 = PackDigits(digits.cases, rules_->max_cases());
  return (k0 * variant_span_ + k1) * case_span_ + k2;
}

CollatedStringCodec::Digits CollatedStringCodec::Split(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) OutOfRange(ordinal, cardinality_);
  Ordinal rest;
  Ordinal k2;
  boost::multiprecision::divide_qr(ordinal, case_span_, rest, k2);
  Ordinal k0;
  Ordinal k1;
  boost::multiprecision::divide_qr(rest, variant_span_, k0, k1);
  Digits digits;
  digits.primaries = plain_.Decode(k0);
  digits.variants = UnpackDigits(k1, rules_->max_variants());
  digits.cases = UnpackDigits(k2, rules_->max_cases());
  return digits;
}

bool CollatedStringCodec::IsValid(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) return false;
  const Digits d = Split(ordinal);
  const std::size_t len = d.primaries.size();
  for (std::size_t i = 0; i < d.variants.size(); ++i) {
    if (i >= len) {
      if (d.variants[i] != 0 || d.cases[i] != 0) return false;
      continue;
    }
    if (d.variants[i] >= rules_->variant_count(d.primaries[i])) return false;
    if (d.cases[i] >= rules_->case_count(d.primaries[i], d.variants[i])) return false;
  }
  return true;
}

std::u32string CollatedStringCodec::Decode(const Ordinal& ordinal) const {
  const Digits d = Split(ordinal);
  const std::size_t len = d.primaries.size();
  for (std::size_t i = len; i < d.variants.size(); ++i) {
    if (d.variants[i] != 0 || d.cases[i] != 0) {
      throw Error(ErrorCode::kNoSuchSlot, "ordinal " + ordinal.str() +
                                              " carries accent/case digits past the "
                                              "end of the string");
    }
  }
  std::u32string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(rules_->char_of({d.primaries[i], d.variants[i], d.cases[i]}));
  }
  return out;
}

std::string CollatedStringCodec::DecodeUtf8(const Ordinal& ordinal) const {
  return utf8::Encode(Decode(ordinal));
}

Ordinal CollatedStringCodec::ClampDown(const Ordinal& ordinal) const {
  Digits d = Split(ordinal);
  const std::size_t len = d.primaries.size();
  const std::size_t m = d.variants.size();

  // Greatest digit vector <= the given one under per-position limits: keep
  // the tight prefix, lower the first offending digit to its limit - 1 and
  // max out everything after it.
  const auto clamp = [m](std::vector<std::uint32_t>& digits, auto limit_of) {
    bool lowered = false;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t limit = limit_of(i);
      if (lowered) {
        digits[i] = limit - 1;
      } else if (digits[i] >= limit) {
        digits[i] = limit - 1;
        lowered = true;
      }
    }
    return lowered;
  };

  const bool variants_lowered = clamp(d.variants, [&](std::size_t i) -> std::uint32_t {
    return i < len ? rules_->variant_count(d.primaries[i]) : 1;
  });
  const auto case_limit = [&](std::size_t i) -> std::uint32_t {
    return i < len ? rules_->case_count(d.primaries[i], d.variants[i]) : 1;
  };
  if (variants_lowered) {
    for (std::size_t i = 0; i < m; ++i) d.cases[i] = case_limit(i) - 1;
  } else {
    clamp(d.cases, case_limit);
  }
  return Join(Digits{d.primaries,
                     std::vector<std::uint32_t>(d.variants.begin(), d.variants.begin() + len),
                     std::vector<std::uint32_t>(d.cases.begin(), d.cases.begin() + len)});
}

// ---------------------------------------------------------------------------
// ScalarCodec

ScalarCodec ScalarCodec::Bit() { return ScalarCodec(FieldKind::kBit, 2); }
ScalarCodec ScalarCodec::Int32() { return ScalarCodec(FieldKind::kInt32, kTwo32); }
ScalarCodec ScalarCodec::Int64() { return ScalarCodec(FieldKind::kInt64, kTwo64); }
ScalarCodec ScalarCodec::Float64() { return ScalarCodec(FieldKind::kFloat64, kTwo64); }
ScalarCodec ScalarCodec::DateTimeMillis() {
  return ScalarCodec(FieldKind::kDateTime, kTwo64);
}

ScalarCodec ScalarCodec::String(std::shared_ptr<const CollationRules> rules,
                                std::uint32_t max_length) {
  auto codec = std::make_shared<const CollatedStringCodec>(std::move(rules), max_length);
  ScalarCodec scalar(FieldKind::kString, codec->cardinality());
  scalar.string_ = std::move(codec);
  return scalar;
}

Ordinal ScalarCodec::Encode(const FieldValue& value) const {
  switch (kind_) {
    case FieldKind::kBit:
      return Expect<bool>(value, kind_) ? 1 : 0;
    case FieldKind::kInt32:
      return Ordinal(static_cast<std::int64_t>(Expect<std::int32_t>(value, kind_)) +
                     2147483648LL);
    case FieldKind::kInt64:
      return Ordinal(static_cast<std::uint64_t>(Expect<std::int64_t>(value, kind_)) ^ kSignBit);
    case FieldKind::kFloat64:
      return Ordinal(DoubleImage(Expect<double>(value, kind_)));
    case FieldKind::kDateTime:
      return Ordinal(static_cast<std::uint64_t>(Expect<DateTime>(value, kind_).millis) ^
                     kSignBit);
    case FieldKind::kString:
      return string_->Encode(std::string_view(Expect<std::string>(value, kind_)));
  }
  throw Error(ErrorCode::kSchemaError, "unsupported field kind");
}

FieldValue ScalarCodec::Decode(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) OutOfRange(ordinal, cardinality_);
  switch (kind_) {
    case FieldKind::kBit:
      return ordinal == 1;
    case FieldKind::kInt32:
      return static_cast<std::int32_t>(ToU64(ordinal) - 2147483648ULL);
    case FieldKind::kInt64:
      return static_cast<std::int64_t>(ToU64(ordinal) ^ kSignBit);
    case FieldKind::kFloat64:
      return DoubleFromImage(ToU64(ordinal));
    case FieldKind::kDateTime:
      return DateTime{static_cast<std::int64_t>(ToU64(ordinal) ^ kSignBit)};
    case FieldKind::kString:
      return string_->DecodeUtf8(ordinal);
  }
  throw Error(ErrorCode::kSchemaError, "unsupported field kind");
}

bool ScalarCodec::IsValid(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) return false;
  return string_ == nullptr || string_->IsValid(ordinal);
}

Ordinal ScalarCodec::ClampDown(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) OutOfRange(ordinal, cardinality_);
  return string_ == nullptr ? ordinal : string_->ClampDown(ordinal);
}

Ordinal ScalarCodec::MaxValid() const { return ClampDown(cardinality_ - 1); }

// ---------------------------------------------------------------------------
// CompositeCodec

CompositeCodec::CompositeCodec(std::vector<ScalarCodec> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) {
    throw Error(ErrorCode::kSchemaError, "a composite key needs at least one field");
  }
  cardinality_ = 1;
  for (const ScalarCodec& field : fields_) cardinality_ *= field.cardinality();
}

Ordinal CompositeCodec::Combine(std::span<const Ordinal> field_ordinals) const {
  if (field_ordinals.size() != fields_.size()) {
    throw Error(ErrorCode::kSchemaError,
                "expected " + std::to_string(fields_.size()) + " field ordinals, got " +
                    std::to_string(field_ordinals.size()));
  }
  Ordinal result = field_ordinals[0];
  for (std::size_t i = 1; i < fields_.size(); ++i) {
    result *= fields_[i].cardinality();
    result += field_ordinals[i];
  }
  return result;
}

std::vector<Ordinal> CompositeCodec::Split(Ordinal ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) OutOfRange(ordinal, cardinality_);
  std::vector<Ordinal> out(fields_.size());
  for (std::size_t i = fields_.size(); i-- > 0;) {
    boost::multiprecision::divide_qr(ordinal, fields_[i].cardinality(), ordinal, out[i]);
  }
  return out;
}

Ordinal CompositeCodec::Encode(const KeyTuple& values) const {
  if (values.size() != fields_.size()) {
    throw Error(ErrorCode::kSchemaError, "expected " + std::to_string(fields_.size()) +
                                             " key values, got " +
                                             std::to_string(values.size()));
  }
  std::vector<Ordinal> ordinals;
  ordinals.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      ordinals.push_back(fields_[i].Encode(values[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "field " + std::to_string(i) + ": " + e.what());
    }
  }
  return Combine(ordinals);
}

KeyTuple CompositeCodec::Decode(const Ordinal& ordinal) const {
  const std::vector<Ordinal> ordinals = Split(ordinal);
  KeyTuple values;
  values.reserve(ordinals.size());
  for (std::size_t i = 0; i < ordinals.size(); ++i) {
    try {
      values.push_back(fields_[i].Decode(ordinals[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "field " + std::to_string(i) + ": " + e.what());
    }
  }
  return values;
}

bool CompositeCodec::IsValid(const Ordinal& ordinal) const {
  if (ordinal < 0 || ordinal >= cardinality_) return false;
  const std::vector<Ordinal> ordinals = Split(ordinal);
  for (std::size_t i = 0; i < ordinals.size(); ++i) {
    if (!fields_[i].IsValid(ordinals[i])) return false;
  }
  return true;
}

Ordinal CompositeCodec::ClampDown(const Ordinal& ordinal) const {
  std::vector<Ordinal> ordinals = Split(ordinal);
  bool lowered = false;
  for (std::size_t i = 0; i < ordinals.size(); ++i) {
    if (lowered) {
      ordinals[i] = fields_[i].MaxValid();
    } else if (!fields_[i].IsValid(ordinals[i])) {
      ordinals[i] = fields_[i].ClampDown(ordinals[i]);
      lowered = true;
    }
  }
  return Combine(ordinals);
}

KeyTuple CompositeCodec::DecodeClamped(const Ordinal& ordinal) const {
  return Decode(ClampDown(ordinal));
}

}  // namespace vscroll
