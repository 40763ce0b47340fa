#include "evascore/text.hpp"

#include <gtest/gtest.h>

#include "evascore/hash.hpp"

using namespace evascore;

TEST(Nfc, ComposesCombiningMarks) {
  // "cafe" + COMBINING ACUTE ACCENT -> precomposed é
  EXPECT_EQ(nfc("cafe\xCC\x81"), "caf\xC3\xA9");
  EXPECT_EQ(nfc("caf\xC3\xA9"), "caf\xC3\xA9");
  EXPECT_EQ(nfc("plain ascii"), "plain ascii");
}

TEST(NormalizeText, TrimsAndCollapsesWhitespace) {
  EXPECT_EQ(normalize_text("  a\t b\n\n c  "), "a b c");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text(" \t\n "), "");
  EXPECT_EQ(normalize_text("already clean"), "already clean");
}

TEST(NormalizeText, Idempotent) {
  std::string once = normalize_text("  caf\x65\xCC\x81   au \t lait ");
  EXPECT_EQ(normalize_text(once), once);
}

TEST(Tokenize, LowercasesAndSplitsOnPunctuation) {
  EXPECT_EQ(tokenize("The dog chased the cat."),
            (std::vector<std::string>{"the", "dog", "chased", "the", "cat"}));
  EXPECT_EQ(tokenize("café-bar"), (std::vector<std::string>{"caf\xC3\xA9", "bar"}));
  EXPECT_EQ(tokenize("in 1963, Collins"),
            (std::vector<std::string>{"in", "1963", "collins"}));
  EXPECT_TRUE(tokenize("...!?").empty());
}

TEST(WsTokens, SplitsOnWhitespaceOnly) {
  EXPECT_EQ(ws_tokens("He played for Berekum Arsenal."),
            (std::vector<std::string>{"He", "played", "for", "Berekum",
                                      "Arsenal."}));
  EXPECT_EQ(token_count("He played for Berekum Arsenal."), 5u);
  EXPECT_EQ(token_count(""), 0u);
}

TEST(TruncateMiddle, KeepsHeadAndTailAroundMarker) {
  EXPECT_EQ(truncate_middle("1 2 3 4 5 6 7 8 9 10", 4), "1 2 ... 9 10");
  EXPECT_EQ(truncate_middle("1 2 3 4 5 6 7", 5), "1 2 3 ... 6 7");
  EXPECT_EQ(truncate_middle("1 2 3", 10), "1 2 3");
  EXPECT_EQ(truncate_middle("a   b", 10), "a b");
  EXPECT_THROW(truncate_middle("a b c", 1), std::invalid_argument);
}

TEST(TruncateMiddle, RecountOnLargeText) {
  std::string text;
  for (int i = 1; i <= 10000; ++i) text += std::to_string(i) + " ";
  std::string cut = truncate_middle(text, 4096);
  std::vector<std::string> tokens = ws_tokens(cut);
  ASSERT_EQ(tokens.size(), 4097u);  // 2048 + marker + 2048
  EXPECT_EQ(tokens[0], "1");
  EXPECT_EQ(tokens[2047], "2048");
  EXPECT_EQ(tokens[2048], "...");
  EXPECT_EQ(tokens[2049], "7953");
  EXPECT_EQ(tokens.back(), "10000");
}

TEST(ContainsCi, AsciiCaseInsensitive) {
  EXPECT_TRUE(contains_ci("Rivera opened a Bakery.", "bakery"));
  EXPECT_TRUE(contains_ci("Ialomi\xC8\x9B""a County", "Ialomi\xC8\x9B""a"));
  EXPECT_FALSE(contains_ci("Rivera opened a bakery.", "lisbon"));
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(
      sha256_hex("abc"),
      "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
