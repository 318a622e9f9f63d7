#include "vscroll/collation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vscroll/error.hpp"
#include "vscroll/utf8.hpp"

namespace vscroll {

namespace {

constexpr char32_t kPrimarySep = U'<';
constexpr char32_t kVariantSep = U';';
constexpr char32_t kCaseSep = U',';

bool IsSeparator(char32_t ch) {
  return ch == kPrimarySep || ch == kVariantSep || ch == kCaseSep;
}

std::string Describe(char32_t ch) { return "'" + utf8::Encode(ch) + "'"; }

}  // namespace

CollationRules CollationRules::Parse(std::string_view utf8_text) {
  const std::u32string text = utf8::Decode(utf8_text);
  if (text.empty()) {
    throw Error(ErrorCode::kMalformedRule, "empty rule text");
  }

  CollationRules rules;
  std::size_t pos = 0;
  if (text[0] == kPrimarySep) ++pos;

  // A deterministic scanner: every token between separators must be exactly
  // one character; the separator that follows decides where the next one goes.
  rules.groups_.emplace_back(1);
  bool expect_char = true;
  for (; pos < text.size(); ++pos) {
    const char32_t ch = text[pos];
    if (IsSeparator(ch)) {
      if (expect_char) {
        throw Error(ErrorCode::kMalformedRule,
                    "empty token before separator at position " + std::to_string(pos));
      }
      if (ch == kPrimarySep) {
        rules.groups_.emplace_back(1);
      } else if (ch == kVariantSep) {
        rules.groups_.back().emplace_back();
      }
      expect_char = true;
      continue;
    }
    if (!expect_char) {
      throw Error(ErrorCode::kMalformedRule,
                  "multi-character element at position " + std::to_string(pos));
    }
    const auto primary = static_cast<std::uint32_t>(rules.groups_.size() - 1);
    const auto variant = static_cast<std::uint32_t>(rules.groups_.back().size() - 1);
    const auto case_form =
        static_cast<std::uint32_t>(rules.groups_.back().back().size());
    if (!rules.reverse_.emplace(ch, CharComponents{primary, variant, case_form}).second) {
      throw Error(ErrorCode::kDuplicateChar, Describe(ch) + " declared twice");
    }
    rules.groups_.back().back().push_back(ch);
    expect_char = false;
  }
  if (expect_char) {
    throw Error(ErrorCode::kMalformedRule, "rule text ends with a separator");
  }

  rules.a0_ = static_cast<std::uint32_t>(rules.groups_.size());
  rules.a1_ = 1;
  rules.a2_ = 1;
  for (const Group& group : rules.groups_) {
    rules.a1_ = std::max(rules.a1_, static_cast<std::uint32_t>(group.size()));
    for (const Variant& variant : group) {
      rules.a2_ = std::max(rules.a2_, static_cast<std::uint32_t>(variant.size()));
    }
  }
  return rules;
}

CollationRules CollationRules::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfigError, "cannot open rule file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  std::erase_if(text, [](char c) { return c == '\n' || c == '\r'; });
  return Parse(text);
}

std::uint32_t CollationRules::variant_count(std::uint32_t primary) const {
  return primary < groups_.size() ? static_cast<std::uint32_t>(groups_[primary].size())
                                  : 0;
}

std::uint32_t CollationRules::case_count(std::uint32_t primary,
                                         std::uint32_t variant) const {
  if (primary >= groups_.size() || variant >= groups_[primary].size()) return 0;
  return static_cast<std::uint32_t>(groups_[primary][variant].size());
}

CharComponents CollationRules::components_of(char32_t ch) const {
  auto it = reverse_.find(ch);
  if (it == reverse_.end()) {
    throw Error(ErrorCode::kUnknownChar, Describe(ch) + " is not in the collation rules");
  }
  return it->second;
}

char32_t CollationRules::char_of(const CharComponents& comp) const {
  if (comp.case_form >= case_count(comp.primary, comp.variant)) {
    throw Error(ErrorCode::kNoSuchSlot,
                "(" + std::to_string(comp.primary) + "," + std::to_string(comp.variant) +
                    "," + std::to_string(comp.case_form) + ") is not populated");
  }
  return groups_[comp.primary][comp.variant][comp.case_form];
}

std::weak_ordering CollationRules::compare(std::u32string_view lhs,
                                           std::u32string_view rhs,
                                           bool accent_sensitive,
                                           bool case_sensitive) const {
  std::vector<CharComponents> a;
  std::vector<CharComponents> b;
  a.reserve(lhs.size());
  b.reserve(rhs.size());
  for (char32_t ch : lhs) a.push_back(components_of(ch));
  for (char32_t ch : rhs) b.push_back(components_of(ch));

  const auto pass = [&](auto member) -> std::weak_ordering {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i].*member != b[i].*member) {
        return a[i].*member < b[i].*member ? std::weak_ordering::less
                                           : std::weak_ordering::greater;
      }
    }
    return a.size() <=> b.size();
  };

  if (auto r = pass(&CharComponents::primary); r != 0) return r;
  if (accent_sensitive) {
    if (auto r = pass(&CharComponents::variant); r != 0) return r;
  }
  if (case_sensitive) {
    if (auto r = pass(&CharComponents::case_form); r != 0) return r;
  }
  return std::weak_ordering::equivalent;
}

std::weak_ordering CollationRules::compare(std::string_view lhs_utf8,
                                           std::string_view rhs_utf8,
                                           bool accent_sensitive,
                                           bool case_sensitive) const {
  return compare(utf8::Decode(lhs_utf8), utf8::Decode(rhs_utf8), accent_sensitive,
                 case_sensitive);
}

std::string CollationRules::ToRuleText() const {
  std::u32string out;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (g != 0) out.push_back(kPrimarySep);
    for (std::size_t v = 0; v < groups_[g].size(); ++v) {
      if (v != 0) out.push_back(kVariantSep);
      for (std::size_t c = 0; c < groups_[g][v].size(); ++c) {
        if (c != 0) out.push_back(kCaseSep);
        out.push_back(groups_[g][v][c]);
      }
    }
  }
  return utf8::Encode(out);
}

}  // namespace vscroll
