#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vscroll {

// Position of a character in the three-level alphabet: letter, accent
// variant of the letter, case form of the variant. All indices are 0-based.
struct CharComponents {
  std::uint32_t primary = 0;
  std::uint32_t variant = 0;
  std::uint32_t case_form = 0;

  friend auto operator<=>(const CharComponents&, const CharComponents&) = default;
};

// Parsed collation rules in the `<` `;` `,` mini-language:
//
//   <г,Г<д,Д<е,Е;ё,Ё<ж,Ж
//
// `<` opens a new letter (primary group), `;` a new accent variant within the
// letter, `,` a new case form within the variant. Immutable once built.
class CollationRules {
 public:
  using Variant = std::vector<char32_t>;
  using Group = std::vector<Variant>;

  // Throws Error(kMalformedRule) or Error(kDuplicateChar).
  static CollationRules Parse(std::string_view utf8_text);

  // Reads a UTF-8 rule file; line breaks are stripped before parsing.
  static CollationRules Load(const std::filesystem::path& path);

  std::uint32_t primary_count() const { return a0_; }
  std::uint32_t max_variants() const { return a1_; }
  std::uint32_t max_cases() const { return a2_; }

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t char_count() const { return reverse_.size(); }

  std::uint32_t variant_count(std::uint32_t primary) const;
  std::uint32_t case_count(std::uint32_t primary, std::uint32_t variant) const;

  bool contains(char32_t ch) const { return reverse_.count(ch) != 0; }

  // Throws Error(kUnknownChar).
  CharComponents components_of(char32_t ch) const;

  // Throws Error(kNoSuchSlot) when the triple names an unpopulated slot.
  char32_t char_of(const CharComponents& comp) const;

  // Three-pass comparison: letters first, then accent variants when
  // accent_sensitive, then case forms when case_sensitive.
  std::weak_ordering compare(std::u32string_view lhs, std::u32string_view rhs,
                             bool accent_sensitive, bool case_sensitive) const;
  std::weak_ordering compare(std::string_view lhs_utf8, std::string_view rhs_utf8,
                             bool accent_sensitive, bool case_sensitive) const;

  // Original rule text, normalized (no leading `<`).
  std::string ToRuleText() const;

 private:
  CollationRules() = default;

  std::vector<Group> groups_;
  std::unordered_map<char32_t, CharComponents> reverse_;
  std::uint32_t a0_ = 0;
  std::uint32_t a1_ = 0;
  std::uint32_t a2_ = 0;
};

}  // namespace vscroll
