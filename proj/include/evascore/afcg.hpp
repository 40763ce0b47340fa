#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "evascore/gateway.hpp"
#include "evascore/prompts.hpp"
#include "evascore/text.hpp"
#include "evascore/types.hpp"

namespace evascore {

// Ask the model whether `hypothesis` is entailed by `reference`. Anything
// other than a True/False reply counts as False, per the prompt's own
// ambiguity rule.
inline bool entails(Gateway& gateway, const std::string& hypothesis,
                    const std::string& reference, const std::string& model,
                    std::vector<std::string>* warnings = nullptr) {
  ChatRequest request;
  request.model = model;
  request.max_tokens = 8;
  request.messages = {
      {"user", prompts::render_entailment_prompt(hypothesis, reference)}};
  std::string reply = gateway.chat(request);
  auto parsed = prompts::parse_boolean_response(reply);
  if (!parsed.has_value()) {
    if (warnings != nullptr) {
      warnings->push_back("ambiguous entailment reply treated as False: " +
                          normalize_text(reply));
    }
    return false;
  }
  return *parsed;
}

// Group one sentence's facts into cascaded chains. Facts are taken shortest
// first; each fact joins the first existing chain whose tail it extends —
// i.e. the chain's last fact is entailed by (contained in) the new, longer
// fact — otherwise it starts a chain of its own.
inline std::vector<LogicChain> build_chains(
    Gateway& gateway, std::vector<AtomicFact> sentence_facts,
    const std::string& model, std::vector<std::string>* warnings = nullptr) {
  std::stable_sort(sentence_facts.begin(), sentence_facts.end(),
                   [](const AtomicFact& a, const AtomicFact& b) {
                     return token_count(a.text) < token_count(b.text);
                   });
  std::vector<LogicChain> chains;
  for (AtomicFact& fact : sentence_facts) {
    bool placed = false;
    for (LogicChain& chain : chains) {
      if (entails(gateway, chain.facts.back().text, fact.text, model,
                  warnings)) {
        chain.facts.push_back(std::move(fact));
        placed = true;
        break;
      }
    }
    if (!placed) {
      LogicChain chain;
      chain.facts.push_back(std::move(fact));
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

// How much validation work the chain grouping saves: `facts` single
// judgements without chains, `chains` with them (one judgement per chain
// element is still made, but the unit of bookkeeping in the ablation is
// chains), plus one per retained doc-level relation.
struct AblationStats {
  std::size_t facts = 0;
  std::size_t chains = 0;
  std::size_t relations = 0;

  std::size_t load_afg() const { return facts; }
  std::size_t load_afcg() const { return chains; }
  std::size_t load_afcg_docre() const { return chains + relations; }
};

inline AblationStats chain_reduction_stats(const FactSet& set) {
  AblationStats stats;
  stats.chains = set.chains.size();
  for (const LogicChain& chain : set.chains) stats.facts += chain.facts.size();
  stats.relations = set.relations.size();
  return stats;
}

}  // namespace evascore
