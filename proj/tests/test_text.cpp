#include <gtest/gtest.h>

#include "wsa/text.hpp"

using namespace wsa::text;

TEST(Tokenize, LowercasesAndDropsPunctuation) {
  EXPECT_EQ(tokenize("Affected with spleen; malicious, spiteful."),
            (std::vector<std::string>{"affected", "with", "spleen", "malicious", "spiteful"}));
}

TEST(Tokenize, KeepsApostrophesAndDigits) {
  EXPECT_EQ(tokenize("don\xE2\x80\x99t  stop 42"), (std::vector<std::string>{"don't", "stop", "42"}));
}

TEST(Tokenize, EmptyAndBlank) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \t\n ").empty());
}

TEST(FoldCase, NonAscii) {
  EXPECT_EQ(fold_case("\xC3\x89T\xC3\x89"), "\xC3\xA9t\xC3\xA9");  // ÉTÉ -> été
}

TEST(Utf8, DecodeEncodeRoundTrip) {
  const std::string s = "a\xC3\xB1\xE2\x82\xAC\xF0\x9F\x98\x80";
  const auto u = decode_utf8(s);
  EXPECT_EQ(u.size(), 4u);
  EXPECT_EQ(encode_utf8(u), s);
}

TEST(Split, KeepsEmptyFields) {
  EXPECT_EQ(split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split_ws("  a  b "), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(trim("  x y \n"), "x y");
  EXPECT_EQ(join({"a", "b"}, "-"), "a-b");
}

TEST(Hash, Fnv1aKnownValue) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
