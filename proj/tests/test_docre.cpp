#include "evascore/docre.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/scripted_backend.hpp"

using namespace evascore;
using testsupport::ScriptedBackend;

namespace {

AtomicFact sentence_fact(const std::string& text) {
  AtomicFact fact;
  fact.text = text;
  fact.origin = Origin::kReference;
  fact.kind = FactKind::kSentenceLevel;
  return fact;
}

RelationTriple rel(const std::string& head, const std::string& relation,
                   const std::string& tail) {
  RelationTriple triple;
  triple.head = head;
  triple.relation = relation;
  triple.tail = tail;
  triple.paraphrase = template_paraphrase(triple);
  return triple;
}

// The five sentence facts and three relation paraphrases used to pin the
// dedup filter's numeric behaviour.
const std::vector<std::string> kFacts = {
    "Rivera opened a bakery in Lisbon.", "The bakery won a national prize.",
    "Rivera moved to Portugal in 2015.", "The prize was awarded in 2019.",
    "Rivera trained as a pastry chef."};

std::vector<AtomicFact> fact_pool() {
  std::vector<AtomicFact> out;
  for (const std::string& text : kFacts) out.push_back(sentence_fact(text));
  return out;
}

std::vector<RelationTriple> relation_pool() {
  RelationTriple r1;  // verbatim duplicate of a sentence fact
  r1.paraphrase = "Rivera opened a bakery in Lisbon.";
  RelationTriple r2;  // genuinely new cross-sentence information
  r2.paraphrase = "Lisbon located in Portugal.";
  RelationTriple r3;  // near-duplicate of the prize fact
  r3.paraphrase = "The bakery received a national prize.";
  return {r1, r2, r3};
}

// Returns a fixed reply regardless of the prompt.
class CannedBackend : public ChatBackend {
 public:
  explicit CannedBackend(std::string reply) : reply_(std::move(reply)) {}
  std::string name() const override { return "canned"; }
  std::string complete(const ChatRequest&) override { return reply_; }
  std::vector<double> embed(const std::string&, const std::string&) override {
    return {1.0};
  }

 private:
  std::string reply_;
};

}  // namespace

TEST(ParseTripleLine, AcceptsDemonstrationFormat) {
  auto triple = parse_triple_line(
      "('Radu Berceanu', 'country of citizenship', 'Romania')");
  ASSERT_TRUE(triple.has_value());
  EXPECT_EQ(triple->head, "Radu Berceanu");
  EXPECT_EQ(triple->relation, "country of citizenship");
  EXPECT_EQ(triple->tail, "Romania");
  // surrounding whitespace is tolerated
  EXPECT_TRUE(parse_triple_line("  ('a', 'b', 'c')  ").has_value());
}

TEST(ParseTripleLine, RejectsMalformedLines) {
  EXPECT_FALSE(parse_triple_line("('a', 'b')").has_value());
  EXPECT_FALSE(parse_triple_line("('', 'rel', 'x')").has_value());
  EXPECT_FALSE(parse_triple_line("('x', 'rel', '')").has_value());
  EXPECT_FALSE(parse_triple_line("no triple here").has_value());
  EXPECT_FALSE(parse_triple_line("").has_value());
  EXPECT_FALSE(parse_triple_line("- ('a', 'b', 'c')").has_value());
}

TEST(ParseTriples, ParsesDemonstrationResponseBlock) {
  std::string demo = prompts::kDocreDemonstration;
  std::size_t response = demo.find("Response\n");
  ASSERT_NE(response, std::string::npos);
  std::vector<RelationTriple> triples =
      parse_triples(demo.substr(response + 9));
  ASSERT_EQ(triples.size(), 14u);
  EXPECT_EQ(triples.front().head, "Ialomi\xC8\x9B""a County");
  EXPECT_EQ(triples.front().relation,
            "located in the administrative territorial entity");
  EXPECT_EQ(triples.front().tail, "Romania");
  EXPECT_EQ(triples.back().head, "Alexeni");
  EXPECT_EQ(triples.back().relation, "country");
  EXPECT_EQ(triples.back().tail, "Romania");
}

TEST(ParseTriples, SkipsProseAndDropsExactRepeats) {
  std::string response =
      "Here are the triples:\n"
      "('a', 'r', 'b')\n"
      "not a triple\n"
      "('a', 'r', 'b')\n"
      "('b', 'r', 'c')\n";
  std::vector<RelationTriple> triples = parse_triples(response);
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].head, "a");
  EXPECT_EQ(triples[1].tail, "c");
}

TEST(ParseEntityList, AcceptsJsonAndLooseBracketForms) {
  EXPECT_EQ(parse_entity_list("[\"Rivera\", \"Lisbon\", \"Rivera\"]"),
            (std::vector<std::string>{"Rivera", "Lisbon"}));
  EXPECT_EQ(parse_entity_list("['Urziceni', 'Aurel Vlaicu Airport']"),
            (std::vector<std::string>{"Urziceni", "Aurel Vlaicu Airport"}));
  EXPECT_EQ(parse_entity_list("Entities: ['a', 'b']"),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(parse_entity_list("no list").empty());
  EXPECT_TRUE(parse_entity_list("[]").empty());
  EXPECT_TRUE(parse_entity_list("['', '  ']").empty());
}

TEST(DocrePrompt, RendersTextEntitiesResponseBlocks) {
  std::string prompt = prompts::render_docre_prompt(
      "Rivera opened a bakery in Lisbon.", {"Rivera", "Lisbon"});
  EXPECT_EQ(prompt.rfind(prompts::kDocreInstruction, 0), 0u);
  EXPECT_NE(prompt.find("('head entity', 'relation', 'tail entity')"),
            std::string::npos);
  EXPECT_NE(prompt.find("Alexeni is a commune"), std::string::npos);
  std::string tail =
      "\n\nText\nRivera opened a bakery in Lisbon."
      "\n\nEntities\n['Rivera', 'Lisbon']"
      "\n\nResponse\n";
  ASSERT_GE(prompt.size(), tail.size());
  EXPECT_EQ(prompt.substr(prompt.size() - tail.size()), tail);
}

TEST(ExtractEntitiesAndTriples, RoundTripThroughBackend) {
  auto backend = std::make_shared<ScriptedBackend>();
  std::string text =
      "Rivera opened a bakery in Lisbon. The bakery won a national prize.";
  backend->entity_responses[text] = "[\"Rivera\", \"Lisbon\"]";
  backend->docre_responses[text] =
      "('Rivera', 'residence', 'Lisbon')\n"
      "garbage line\n"
      "('Lisbon', 'has', '')\n"
      "('Rivera', 'award received', 'a national prize')";
  Gateway gateway(backend);

  std::vector<std::string> entities = extract_entities(gateway, text, "m");
  EXPECT_EQ(entities, (std::vector<std::string>{"Rivera", "Lisbon"}));
  std::vector<RelationTriple> triples =
      extract_triples(gateway, text, entities, "m");
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].relation, "residence");
  EXPECT_EQ(triples[1].relation, "award received");
  EXPECT_EQ(backend->calls["entities"], 1);
  EXPECT_EQ(backend->calls["docre"], 1);

  // no entities: the relation call is skipped entirely
  EXPECT_TRUE(extract_triples(gateway, text, {}, "m").empty());
  EXPECT_EQ(backend->calls["docre"], 1);
}

TEST(Paraphrase, TemplateJoinsTripleAsSentence) {
  RelationTriple triple = rel("Lisbon", "located in", "Portugal");
  EXPECT_EQ(template_paraphrase(triple), "Lisbon located in Portugal.");
  paraphrase_triple(nullptr, triple, ParaphraseMode::kTemplate, "m");
  EXPECT_EQ(triple.paraphrase, "Lisbon located in Portugal.");
}

TEST(Paraphrase, ChatModeKeepsEntitiesOrFallsBack) {
  RelationTriple triple = rel("Lisbon", "located in", "Portugal");
  {
    Gateway gateway(
        std::make_shared<CannedBackend>("Lisbon is located in Portugal."));
    paraphrase_triple(&gateway, triple, ParaphraseMode::kChat, "m");
    EXPECT_EQ(triple.paraphrase, "Lisbon is located in Portugal.");
  }
  {
    // reply loses the tail entity: template fallback
    Gateway gateway(std::make_shared<CannedBackend>("They are related."));
    paraphrase_triple(&gateway, triple, ParaphraseMode::kChat, "m");
    EXPECT_EQ(triple.paraphrase, "Lisbon located in Portugal.");
  }
}

TEST(FilterDuplicates, FrozenTfidfCosines) {
  std::vector<std::string> docs = kFacts;
  docs.push_back("Rivera opened a bakery in Lisbon.");
  docs.push_back("Lisbon located in Portugal.");
  docs.push_back("The bakery received a national prize.");
  TfidfModel model(docs);
  EXPECT_NEAR(model.similarity("Rivera opened a bakery in Lisbon.", kFacts[0]),
              1.0, 1e-9);
  EXPECT_NEAR(model.similarity("Lisbon located in Portugal.", kFacts[0]),
              0.322407518991, 1e-9);
  EXPECT_NEAR(
      model.similarity("The bakery received a national prize.", kFacts[1]),
      0.711439074370, 1e-9);
}

TEST(FilterDuplicates, DropsDuplicatesAtDefaultThresholds) {
  FilterResult result = filter_duplicates(relation_pool(), fact_pool(),
                                          FilterConfig{}, EmbedFn{},
                                          Origin::kReference);
  ASSERT_EQ(result.retained.size(), 1u);
  EXPECT_EQ(result.retained[0].text, "Lisbon located in Portugal.");
  EXPECT_EQ(result.retained[0].fact_id, "rR1");
  EXPECT_EQ(result.retained[0].kind, FactKind::kDocRelation);
  EXPECT_EQ(result.dropped,
            (std::vector<std::string>{"Rivera opened a bakery in Lisbon.",
                                      "The bakery received a national prize."}));
}

TEST(FilterDuplicates, RetainedSetGrowsWithThreshold) {
  std::vector<std::string> previous;
  for (double theta : {0.1, 0.33, 0.6, 0.72, 1.01}) {
    FilterConfig config;
    config.theta_tfidf = theta;
    FilterResult result = filter_duplicates(relation_pool(), fact_pool(),
                                            config, EmbedFn{},
                                            Origin::kCandidate);
    std::vector<std::string> retained;
    for (const AtomicFact& fact : result.retained) {
      retained.push_back(fact.text);
      EXPECT_EQ(fact.fact_id, "cR" + std::to_string(retained.size()));
    }
    // a looser threshold never un-retains anything a stricter one kept
    for (const std::string& text : previous) {
      EXPECT_NE(std::find(retained.begin(), retained.end(), text),
                retained.end())
          << "lost at theta=" << theta << ": " << text;
    }
    EXPECT_EQ(result.retained.size() + result.dropped.size(), 3u);
    previous = retained;
  }
  EXPECT_EQ(previous.size(), 3u);  // theta above 1: nothing is a duplicate
}

TEST(FilterDuplicates, EmbeddingScreenCatchesTokenDisjointDuplicates) {
  std::map<std::string, std::vector<double>> table = {
      {"alpha beta gamma.", {1.0, 0.0, 0.0}},
      {"delta epsilon.", {0.0, 0.0, 1.0}},
      {"zeta eta.", {1.0, 0.0, 0.0}},
      {"theta iota.", {0.0, 1.0, 0.0}},
  };
  int embed_calls = 0;
  EmbedFn embed = [&](const std::string& text) {
    ++embed_calls;
    return table.at(text);
  };
  std::vector<AtomicFact> facts = {sentence_fact("alpha beta gamma."),
                                   sentence_fact("delta epsilon.")};
  RelationTriple r1;
  r1.paraphrase = "alpha beta gamma.";  // tf-idf duplicate; embeds not needed
  RelationTriple r2;
  r2.paraphrase = "zeta eta.";  // no shared tokens, same embedding direction
  RelationTriple r3;
  r3.paraphrase = "theta iota.";  // orthogonal to everything
  FilterResult result = filter_duplicates({r1, r2, r3}, facts, FilterConfig{},
                                          embed, Origin::kCandidate);
  ASSERT_EQ(result.retained.size(), 1u);
  EXPECT_EQ(result.retained[0].text, "theta iota.");
  EXPECT_EQ(result.retained[0].fact_id, "cR1");
  EXPECT_EQ(result.dropped,
            (std::vector<std::string>{"alpha beta gamma.", "zeta eta."}));
  // embeddings are computed lazily: none for r1, comparanda + query after
  EXPECT_EQ(embed_calls, 6);
}
