#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evascore/text.hpp"

namespace evascore {
namespace prompts {

// Instructions and demonstrations are fixed strings; a handful of known
// typos ("neural", "Domonstrations"-era phrasing) are kept as-is because the
// recorded model behaviour depends on the exact wording.

inline constexpr const char* kAfgInstruction =
    "Please breakdown the following sentence into independent facts:";

inline constexpr const char* kAfgDemonstrations =
    "Example 1\n"
    "He made his acting debut in the film The Moon is the Sun's Dream (1992), "
    "and continued to appear in small and supporting roles throughout the "
    "1990s.\n"
    "- He made his acting debut in the film.\n"
    "- He made his acting debut in The Moon is the Sun's Dream.\n"
    "- The Moon is the Sun's Dream is a film.\n"
    "- The Moon is the Sun's Dream was released in 1992.\n"
    "- After his acting debut, he appeared in small and supporting roles.\n"
    "- After his acting debut, he appeared in small and supporting roles "
    "throughout the 1990s.\n"
    "\n"
    "Example 2\n"
    "In 1963, Collins became one of the third group of astronauts selected "
    "by NASA and he served as the back-up Command Module Pilot for the "
    "Gemini 7 mission.\n"
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

inline constexpr const char* kEntailmentInstruction =
    "Given a hypothesis and a reference, determine if the hypothesis is "
    "entailed by the reference.\n"
    "\n"
    "Entailed means that if we use the information from reference, we can "
    "infer the hypothesis, e.g. the hypothesis is in a logical relationship "
    "with the reference.\n"
    "\n"
    "If the hypothesis is entailed by the reference, answer True.\n"
    "\n"
    "If the hypothesis contradicts the reference or the hypothesis is "
    "neural,answer False.\n"
    "\n"
    "If the answer is ambiguous, answer False.\n"
    "\n"
    "The output should be True and False only. You should not explain why "
    "you made this choice.\n"
    "\n"
    "Now let's begin the question:";

inline constexpr const char* kEntailmentDemonstrations =
    "Example 1\n"
    "\n"
    "Hypothesis: The cat is on the mat.\n"
    "\n"
    "Reference: The cat is sleeping on the mat.\n"
    "\n"
    "Answer: True\n"
    "\n"
    "Example 2\n"
    "\n"
    "Hypothesis: The cat is on the mat.\n"
    "\n"
    "Reference: The dog and the rat are on the mat.\n"
    "\n"
    "Answer: False";

inline constexpr const char* kDocreInstruction =
    "Given a text and entities in the given text, your task is to extract "
    "document-level relation triples from the text.\n"
    "\n"
    "A relation triple is a 3-tuple (subject, relation, object) where "
    "subject and object are named entities and relation is the relation "
    "between them. For example, given the text \"Bill Gates is the founder "
    "of Microsoft\", the extracted relation triple would be (Bill Gates, "
    "founder, Microsoft).\n"
    "\n"
    "In document-level RE, subject and object entities in a given triple "
    "might be dispersed across distinct sentences, and certain entities may "
    "have aliases in the form of distinct entity mentions. Therefore, you "
    "should pay attention to relations across sentences and entity aliases "
    "rather than sentence-level relations. i.e. You should not respond with "
    "sentence-level relations, but document-level relations.\n"
    "\n"
    "The answer format is listed below, you should obey it for any "
    "situation. Any additional information should not be added. Neither "
    "head entity nor tail entity should be empty strings.\n"
    "\n"
    "The relation triples should be in the following format:\n"
    "('head entity', 'relation', 'tail entity')\n"
    "('head entity', 'relation', 'tail entity')\n"
    "('head entity', 'relation', 'tail entity')";

inline constexpr const char* kDocreDemonstration =
    "Text\n"
    "Alexeni is a commune in Ialomi\xC8\x9B""a County, Romania, some 65 km "
    "north-east of Bucharest, near the town of Urziceni. It is composed of a "
    "single village, Alexeni. Until 2001 a Romanian Air Force military "
    "helicopters unit was located at the nearby airfield. In 2007, as the "
    "airfield was not used by the Romanian Air Force any longer, the former "
    "Minister of Transport Radu Berceanu suggested to use the location for "
    "Bucharest's new low-cost flights airport(as the operational tariffs for "
    "Bucharest's previous low-cost hub, Aurel Vlaicu Airport, were set to "
    "grow). However, some analysts considered the project unrealistic and "
    "doomed to fail due to the poor conditions of the infrastructure in the "
    "area. Eventually, those plans were abandoned and all low-cost flights "
    "were moved in March 2012 at Bucharest main airport Henri Coand\xC4\x83 "
    "International Airport.\n"
    "\n"
    "Entities\n"
    "['Urziceni', 'Aurel Vlaicu Airport', '2001', '2007', 'Radu Berceanu', "
    "'Romania', 'Romanian Air Force', 'Alexeni', 'Ialomi\xC8\x9B""a County', "
    "'March 2012', 'Henri Coand\xC4\x83 International Airport', '65 km', "
    "'Bucharest']\n"
    "\n"
    "Response\n"
    "('Ialomi\xC8\x9B""a County', 'located in the administrative territorial "
    "entity', 'Romania')\n"
    "('Ialomi\xC8\x9B""a County', 'country', 'Romania')\n"
    "('Ialomi\xC8\x9B""a County', 'contains administrative territorial "
    "entity', 'Alexeni')\n"
    "('Romania', 'contains administrative territorial entity', "
    "'Ialomi\xC8\x9B""a County')\n"
    "('Bucharest', 'country', 'Romania')\n"
    "('Bucharest', 'located in the administrative territorial entity', "
    "'Romania')\n"
    "('Romanian Air Force', 'country', 'Romania')\n"
    "('Aurel Vlaicu Airport', 'country', 'Romania')\n"
    "('Aurel Vlaicu Airport', 'located in the administrative territorial "
    "entity', 'Bucharest')\n"
    "('Henri Coand\xC4\x83 International Airport', 'country', 'Romania')\n"
    "('Urziceni', 'country', 'Romania')\n"
    "('Radu Berceanu', 'country of citizenship', 'Romania')\n"
    "('Alexeni', 'located in the administrative territorial entity', "
    "'Ialomi\xC8\x9B""a County')\n"
    "('Alexeni', 'country', 'Romania')";

inline constexpr const char* kValidationInstruction =
    "Given a hypothesis and a reference, determine if the hypothesis is "
    "entailed by the reference.\n"
    "\n"
    "Entailed means that if we use the information from reference, we can "
    "infer the hypothesis, e.g. the hypothesis is in a logical relationship "
    "with the reference.\n"
    "\n"
    "The hypothesis may be part of a logical chain, so we may provide you "
    "with the correctness of previous states.\n"
    "\n"
    "If we provide you with the correctness of previous states, you should "
    "not focus on the information that is redundant, that is, the "
    "information that exists both in previous facts and the current fact. "
    "Whether they are correct or not, you should not care them. You should "
    "only concentrate on new information.\n"
    "\n"
    "If the hypothesis is entailed by the reference, answer True.\n"
    "\n"
    "If the hypothesis contradicts the reference or the hypothesis is "
    "neural,answer False.\n"
    "\n"
    "If the answer is ambiguous, answer False.\n"
    "\n"
    "The output should be True and False only. You should not explain why "
    "you make this choice.";

inline constexpr const char* kEntityInstruction =
    "List the named entities that appear in the following text. Respond "
    "with a JSON array of strings, each entity written exactly as it "
    "appears in the text, in order of first mention, with no duplicates "
    "and no other output.";

// Fact-generation prompt for a single sentence: instruction, then the two
// worked examples, then the target sentence on its own line.
struct AfgPrompt {
  std::string instruction = kAfgInstruction;
  std::string demonstrations = kAfgDemonstrations;
  std::string target_sentence;

  std::string render() const {
    return instruction + "\n\n" + demonstrations + "\n\n" + target_sentence +
           "\n";
  }
};

inline std::string render_afg_prompt(const std::string& sentence) {
  AfgPrompt prompt;
  prompt.target_sentence = sentence;
  return prompt.render();
}

inline std::string render_entailment_prompt(const std::string& hypothesis,
                                            const std::string& reference) {
  std::string out = kEntailmentInstruction;
  out += "\n\n";
  out += kEntailmentDemonstrations;
  out += "\n\nHypothesis: " + hypothesis;
  out += "\n\nReference: " + reference;
  out += "\n\nAnswer:";
  return out;
}

inline std::string render_entity_prompt(const std::string& text) {
  std::string out = kEntityInstruction;
  out += "\n\nText\n" + text + "\n";
  return out;
}

// Entities rendered in the same bracketed single-quoted style as the
// demonstration.
inline std::string format_entity_list(const std::vector<std::string>& ents) {
  std::string out = "[";
  for (std::size_t i = 0; i < ents.size(); ++i) {
    if (i > 0) out += ", ";
    out += "'" + ents[i] + "'";
  }
  out += "]";
  return out;
}

inline std::string render_docre_prompt(const std::string& text,
                                       const std::vector<std::string>& ents) {
  std::string out = kDocreInstruction;
  out += "\n\n";
  out += kDocreDemonstration;
  out += "\n\nText\n" + text;
  out += "\n\nEntities\n" + format_entity_list(ents);
  out += "\n\nResponse\n";
  return out;
}

// Evidence facts become the reference block; prior chain verdicts, if any,
// are listed before the hypothesis.
inline std::string render_validation_prompt(
    const std::string& hypothesis, const std::vector<std::string>& evidence,
    const std::vector<std::pair<std::string, bool>>& prior_states) {
  std::string out = kValidationInstruction;
  out += "\n\nReference:";
  for (const std::string& item : evidence) out += "\n- " + item;
  if (!prior_states.empty()) {
    out += "\n\nPrevious states:";
    for (const auto& [text, verdict] : prior_states) {
      out += "\n- " + text + ": " + (verdict ? "True" : "False");
    }
  }
  out += "\n\nHypothesis: " + hypothesis;
  out += "\n\nAnswer:";
  return out;
}

// First word of the reply decides; anything else is ambiguous and the caller
// treats it as False.
inline std::optional<bool> parse_boolean_response(const std::string& reply) {
  std::vector<std::string> tokens = tokenize(reply);
  if (tokens.empty()) return std::nullopt;
  if (tokens.front() == "true") return true;
  if (tokens.front() == "false") return false;
  return std::nullopt;
}

}  // namespace prompts
}  // namespace evascore
