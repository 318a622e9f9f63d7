#include "vscroll/collation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "expect_error.hpp"
#include "vscroll/utf8.hpp"

namespace vscroll {
namespace {

using E = ErrorCode;

TEST(CollationParse, CountsFollowSeparators) {
  auto rules = CollationRules::Parse("<а,А<б,Б");
  EXPECT_EQ(rules.primary_count(), 2u);
  EXPECT_EQ(rules.max_variants(), 1u);
  EXPECT_EQ(rules.max_cases(), 2u);

  auto yo = CollationRules::Parse("<е,Е;ё,Ё");
  EXPECT_EQ(yo.primary_count(), 1u);
  EXPECT_EQ(yo.max_variants(), 2u);
  EXPECT_EQ(yo.max_cases(), 2u);
  EXPECT_EQ(yo.components_of(U'Ё'), (CharComponents{0, 1, 1}));

  auto single = CollationRules::Parse("<a");
  EXPECT_EQ(single.primary_count(), 1u);
  EXPECT_EQ(single.max_variants(), 1u);
  EXPECT_EQ(single.max_cases(), 1u);
  EXPECT_EQ(single.components_of(U'a'), (CharComponents{0, 0, 0}));
}

TEST(CollationParse, LeadingLessThanIsOptional) {
  auto a = CollationRules::Parse("г,Г<д,Д<е,Е;ё,Ё<ж,Ж");
  auto b = CollationRules::Parse("<г,Г<д,Д<е,Е;ё,Ё<ж,Ж");
  EXPECT_EQ(a.ToRuleText(), b.ToRuleText());
  EXPECT_EQ(a.primary_count(), 4u);
  EXPECT_EQ(a.components_of(U'ё'), (CharComponents{2, 1, 0}));
}

TEST(CollationParse, RejectsMalformedText) {
  EXPECT_VSCROLL_ERROR(CollationRules::Parse(""), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<"), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<а,,А"), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<а<<б"), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<а;"), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<аб"), E::kMalformedRule);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<а,А<а"), E::kDuplicateChar);
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("\xff"), E::kSchemaError);
}

TEST(CollationParse, WhitespaceIsAnOrdinaryCharacter) {
  auto rules = CollationRules::Parse("< <a");
  EXPECT_EQ(rules.components_of(U' '), (CharComponents{0, 0, 0}));
  EXPECT_VSCROLL_ERROR(CollationRules::Parse("<a, <a"), E::kDuplicateChar);
}

TEST(CollationLookup, ComponentsAndInverse) {
  auto yo = CollationRules::Parse("<е,Е;ё,Ё");
  EXPECT_EQ(yo.components_of(U'е'), (CharComponents{0, 0, 0}));
  EXPECT_EQ(yo.components_of(U'ё'), (CharComponents{0, 1, 0}));
  EXPECT_EQ(yo.char_of({0, 1, 1}), U'Ё');

  auto ab = CollationRules::Parse("<а,А<б,Б");
  EXPECT_EQ(ab.components_of(U'Б'), (CharComponents{1, 0, 1}));
  EXPECT_EQ(ab.char_of({0, 0, 0}), U'а');
  EXPECT_VSCROLL_ERROR(ab.char_of({0, 1, 0}), E::kNoSuchSlot);
  EXPECT_VSCROLL_ERROR(ab.char_of({2, 0, 0}), E::kNoSuchSlot);
  EXPECT_VSCROLL_ERROR(ab.char_of({0, 0, 2}), E::kNoSuchSlot);
  EXPECT_VSCROLL_ERROR(ab.components_of(U'z'), E::kUnknownChar);
}

TEST(CollationLookup, RoundTripAndMaximaOverRaggedGroups) {
  auto rules = CollationRules::Parse("<a,A;á<b<c,C;ç;ć,Ć,ĉ<d;e,E");
  std::uint32_t a1 = 0;
  std::uint32_t a2 = 0;
  std::size_t chars = 0;
  for (std::uint32_t p = 0; p < rules.groups().size(); ++p) {
    const auto& group = rules.groups()[p];
    a1 = std::max<std::uint32_t>(a1, static_cast<std::uint32_t>(group.size()));
    EXPECT_EQ(rules.variant_count(p), group.size());
    for (std::uint32_t v = 0; v < group.size(); ++v) {
      a2 = std::max<std::uint32_t>(a2, static_cast<std::uint32_t>(group[v].size()));
      EXPECT_EQ(rules.case_count(p, v), group[v].size());
      for (std::uint32_t c = 0; c < group[v].size(); ++c) {
        const char32_t ch = group[v][c];
        ++chars;
        EXPECT_EQ(rules.components_of(ch), (CharComponents{p, v, c}));
        EXPECT_EQ(rules.char_of(rules.components_of(ch)), ch);
      }
    }
  }
  EXPECT_EQ(rules.max_variants(), a1);
  EXPECT_EQ(rules.max_cases(), a2);
  EXPECT_EQ(rules.char_count(), chars);
  EXPECT_EQ(a1, 3u);
  EXPECT_EQ(a2, 3u);
}

TEST(CollationCompare, Examples) {
  auto yo = CollationRules::Parse("<е,Е;ё,Ё");
  EXPECT_EQ(yo.compare(std::string_view("е"), std::string_view("ё"), true, true),
            std::weak_ordering::less);
  EXPECT_EQ(yo.compare(std::string_view("е"), std::string_view("ё"), true, false),
            std::weak_ordering::less);
  EXPECT_EQ(yo.compare(std::string_view("е"), std::string_view("ё"), false, false),
            std::weak_ordering::equivalent);
  EXPECT_EQ(yo.compare(std::string_view("е"), std::string_view("Е"), false, true),
            std::weak_ordering::less);

  auto ab = CollationRules::Parse("<а,А<б,Б");
  for (bool accent : {false, true}) {
    for (bool cs : {false, true}) {
      EXPECT_EQ(ab.compare(std::string_view("аб"), std::string_view("аб"), accent, cs),
                std::weak_ordering::equivalent);
    }
  }
  // Letters decide before case, and a prefix sorts first.
  EXPECT_EQ(ab.compare(std::string_view("Аа"), std::string_view("аб"), true, true),
            std::weak_ordering::less);
  EXPECT_EQ(ab.compare(std::string_view("а"), std::string_view("аа"), true, true),
            std::weak_ordering::less);
  EXPECT_EQ(ab.compare(std::string_view("Б"), std::string_view("ба"), true, true),
            std::weak_ordering::less);
  EXPECT_VSCROLL_ERROR(ab.compare(std::string_view("x"), std::string_view("а"), true, true),
                       E::kUnknownChar);
}

std::u32string RandomString(std::mt19937_64& rng, const std::u32string& alphabet,
                            std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U' ');
  for (auto& ch : s) ch = alphabet[pick(rng)];
  return s;
}

// Transitivity and antisymmetry over random triples; with both flags on the
// order must also be total (equivalent only when identical).
TEST(CollationCompare, WeakOrderProperties) {
  auto rules = CollationRules::Parse("<а,А<б,Б;в,В<г");
  const std::u32string alphabet = U"аАбБвВг";
  std::mt19937_64 rng(7);
  for (bool accent : {false, true}) {
    for (bool cs : {false, true}) {
      for (int trial = 0; trial < 3000; ++trial) {
        auto x = RandomString(rng, alphabet, 3);
        auto y = RandomString(rng, alphabet, 3);
        auto z = RandomString(rng, alphabet, 3);
        auto xy = rules.compare(x, y, accent, cs);
        auto yx = rules.compare(y, x, accent, cs);
        auto yz = rules.compare(y, z, accent, cs);
        auto xz = rules.compare(x, z, accent, cs);
        EXPECT_EQ(xy < 0, yx > 0);
        EXPECT_EQ(xy == 0, yx == 0);
        if (xy <= 0 && yz <= 0) EXPECT_TRUE(xz <= 0);
        if (xy == 0 && yz == 0) EXPECT_TRUE(xz == 0);
        if (accent && cs) EXPECT_EQ(xy == 0, x == y);
      }
    }
  }
}

TEST(CollationLoad, StripsLineBreaks) {
  const auto path = std::filesystem::temp_directory_path() / "vscroll_rules_test.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "<а,А\r\n<б,Б;в,В\n";
  }
  auto rules = CollationRules::Load(path);
  EXPECT_EQ(rules.primary_count(), 2u);
  EXPECT_EQ(rules.components_of(U'В'), (CharComponents{1, 1, 1}));
  std::filesystem::remove(path);
  EXPECT_VSCROLL_ERROR(CollationRules::Load(path), E::kConfigError);
}

}  // namespace
}  // namespace vscroll
