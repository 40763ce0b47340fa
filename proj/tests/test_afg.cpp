#include "evascore/afg.hpp"

#include <memory>

#include <gtest/gtest.h>

#include "support/scripted_backend.hpp"

using namespace evascore;
using testsupport::ScriptedBackend;

namespace {

const char* kExample2Sentence =
    "In 1963, Collins became one of the third group of astronauts selected "
    "by NASA and he served as the back-up Command Module Pilot for the "
    "Gemini 7 mission.";

const char* kExample2Response =
    "- Collins became an astronaut.\n"
    "- Collins became one of the third group of astronauts.\n"
    "- Collins became one of the third group of astronauts selected.\n"
    "- Collins became one of the third group of astronauts selected by "
    "NASA.\n"
    "- Collins became one of the third group of astronauts selected by NASA "
    "in 1963.\n"
    "- He served as the Command Module Pilot.\n"
    "- He served as the back-up Command Module Pilot.\n"
    "- He served as the Command Module Pilot for the Gemini 7 mission.";

const char* kExample1Response =
    "- He made his acting debut in the film.\n"
    "- He made his acting debut in The Moon is the Sun's Dream.\n"
    "- The Moon is the Sun's Dream is a film.\n"
    "- The Moon is the Sun's Dream was released in 1992.\n"
    "- After his acting debut, he appeared in small and supporting roles.\n"
    "- After his acting debut, he appeared in small and supporting roles "
    "throughout the 1990s.";

}  // namespace

TEST(AfgPrompt, InstructionLeadsAndTargetTrails) {
  std::string prompt = prompts::render_afg_prompt(kExample2Sentence);
  EXPECT_EQ(prompt.rfind(prompts::kAfgInstruction, 0), 0u);
  EXPECT_NE(prompt.find("Example 1"), std::string::npos);
  EXPECT_NE(prompt.find("Example 2"), std::string::npos);
  EXPECT_NE(prompt.find("- Collins became an astronaut."), std::string::npos);
  // target sentence is the last non-empty line
  std::string tail = prompt.substr(prompt.size() - strlen(kExample2Sentence) - 1);
  EXPECT_EQ(tail, std::string(kExample2Sentence) + "\n");
  // demonstrations precede the target
  EXPECT_LT(prompt.find("Example 2"), prompt.rfind(kExample2Sentence));
}

TEST(ParseFactLines, ParsesDocumentedExampleResponses) {
  std::vector<std::string> facts = parse_fact_lines(kExample2Response);
  ASSERT_EQ(facts.size(), 8u);
  EXPECT_EQ(facts.front(), "Collins became an astronaut.");
  EXPECT_EQ(facts.back(),
            "He served as the Command Module Pilot for the Gemini 7 mission.");

  facts = parse_fact_lines(kExample1Response);
  ASSERT_EQ(facts.size(), 6u);
  EXPECT_EQ(facts.front(), "He made his acting debut in the film.");
}

TEST(ParseFactLines, IgnoresProseAndPadding) {
  std::string reply =
      "Sure! Here are the facts:\n"
      "\n"
      "  - Fact one.  \n"
      "- Fact two.\n"
      "That is all.\n"
      "-Not a fact (no space after dash)\n"
      "- \n";
  std::vector<std::string> facts = parse_fact_lines(reply);
  ASSERT_EQ(facts.size(), 2u);
  EXPECT_EQ(facts[0], "Fact one.");
  EXPECT_EQ(facts[1], "Fact two.");
  EXPECT_TRUE(parse_fact_lines("No list here.").empty());
}

TEST(SplitSentences, BasicBoundaries) {
  EXPECT_EQ(split_sentences("One fact. Another fact! A third? Done."),
            (std::vector<std::string>{"One fact.", "Another fact!",
                                      "A third?", "Done."}));
  EXPECT_EQ(split_sentences("No terminal punctuation"),
            (std::vector<std::string>{"No terminal punctuation"}));
  EXPECT_THROW(split_sentences("   "), EmptyInput);
}

TEST(SplitSentences, AbbreviationsAndInitialsDoNotSplit) {
  EXPECT_EQ(
      split_sentences("Dr. Silva led a trial of the compound in 2021. The "
                      "compound reduced fatigue."),
      (std::vector<std::string>{
          "Dr. Silva led a trial of the compound in 2021.",
          "The compound reduced fatigue."}));
  EXPECT_EQ(split_sentences("J. K. Rowling wrote it. It sold well."),
            (std::vector<std::string>{"J. K. Rowling wrote it.",
                                      "It sold well."}));
  EXPECT_EQ(split_sentences("Costs rose, e.g. fuel. Wages fell."),
            (std::vector<std::string>{"Costs rose, e.g. fuel.",
                                      "Wages fell."}));
}

TEST(SplitSentences, DecimalsAndQuotes) {
  EXPECT_EQ(split_sentences("Growth hit 3.5 percent. Inflation fell."),
            (std::vector<std::string>{"Growth hit 3.5 percent.",
                                      "Inflation fell."}));
  EXPECT_EQ(split_sentences("He said 'Stop.' Then he left."),
            (std::vector<std::string>{"He said 'Stop.'", "Then he left."}));
}

TEST(SplitSentences, NormalizesFirst) {
  EXPECT_EQ(split_sentences("  Spaced   out.   Second\n sentence. "),
            (std::vector<std::string>{"Spaced out.", "Second sentence."}));
}

TEST(GenerateAtomicFacts, OneCallPerSentenceWithDedup) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->afg_responses["First thing happened."] =
      "- A thing happened.\n- It happened first.";
  backend->afg_responses["Second thing happened."] =
      "- A thing happened.\n- It happened second.";
  Gateway gateway(backend);
  std::vector<std::string> warnings;
  std::vector<SentenceFacts> groups = generate_atomic_facts(
      gateway, "First thing happened. Second thing happened.",
      Origin::kCandidate, "afg-model", &warnings);
  ASSERT_EQ(groups.size(), 2u);
  ASSERT_EQ(groups[0].facts.size(), 2u);
  // "A thing happened." repeats verbatim in sentence 2 and is recorded once
  ASSERT_EQ(groups[1].facts.size(), 1u);
  EXPECT_EQ(groups[1].facts[0].text, "It happened second.");
  EXPECT_EQ(groups[0].facts[0].origin, Origin::kCandidate);
  EXPECT_EQ(groups[0].facts[0].kind, FactKind::kSentenceLevel);
  EXPECT_EQ(backend->calls["afg"], 2);
  EXPECT_TRUE(warnings.empty());
}

TEST(GenerateAtomicFacts, FallsBackToSentenceOnUnparseableReply) {
  auto backend = std::make_shared<ScriptedBackend>();
  backend->afg_responses["Nothing to extract here."] =
      "I could not find any facts.";
  Gateway gateway(backend);
  std::vector<std::string> warnings;
  std::vector<SentenceFacts> groups =
      generate_atomic_facts(gateway, "Nothing to extract here.",
                            Origin::kReference, "afg-model", &warnings);
  ASSERT_EQ(groups.size(), 1u);
  ASSERT_EQ(groups[0].facts.size(), 1u);
  EXPECT_EQ(groups[0].facts[0].text, "Nothing to extract here.");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("using sentence as fact"), std::string::npos);
}
