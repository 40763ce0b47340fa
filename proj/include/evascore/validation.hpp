#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/gateway.hpp"
#include "evascore/prompts.hpp"
#include "evascore/retrieval.hpp"
#include "evascore/types.hpp"

namespace evascore {

// Judges one fact against retrieved evidence, given the verdicts already
// reached for earlier facts in the same chain.
class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual bool verify(
      const std::string& hypothesis, const std::vector<std::string>& evidence,
      const std::vector<std::pair<std::string, bool>>& prior_states) = 0;
};

// The real thing: renders the validation prompt and parses True/False;
// ambiguous replies are False by the prompt's own rule.
class ChatVerifier : public Verifier {
 public:
  ChatVerifier(Gateway& gateway, std::string model)
      : gateway_(gateway), model_(std::move(model)) {}

  bool verify(const std::string& hypothesis,
              const std::vector<std::string>& evidence,
              const std::vector<std::pair<std::string, bool>>& prior_states)
      override {
    ChatRequest request;
    request.model = model_;
    request.max_tokens = 8;
    request.messages = {{"user", prompts::render_validation_prompt(
                                     hypothesis, evidence, prior_states)}};
    auto parsed = prompts::parse_boolean_response(gateway_.chat(request));
    if (!parsed.has_value()) ++ambiguous_;
    return parsed.value_or(false);
  }

  std::size_t ambiguous() const { return ambiguous_; }

 private:
  Gateway& gateway_;
  std::string model_;
  std::size_t ambiguous_ = 0;
};

// Memoizes verdicts on (hypothesis, evidence, prior states) so the precision
// and recall passes never repeat a judgement. Not thread-safe; use one per
// worker.
class CachingVerifier : public Verifier {
 public:
  explicit CachingVerifier(Verifier& inner) : inner_(inner) {}

  bool verify(const std::string& hypothesis,
              const std::vector<std::string>& evidence,
              const std::vector<std::pair<std::string, bool>>& prior_states)
      override {
    nlohmann::json prior = nlohmann::json::array();
    for (const auto& [text, verdict] : prior_states)
      prior.push_back({{"text", text}, {"verdict", verdict}});
    std::string key = nlohmann::json{{"hypothesis", hypothesis},
                                     {"evidence", evidence},
                                     {"prior", prior}}
                          .dump();
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++hits_;
      return it->second;
    }
    bool verdict = inner_.verify(hypothesis, evidence, prior_states);
    cache_[key] = verdict;
    return verdict;
  }

  std::size_t hits() const { return hits_; }

 private:
  Verifier& inner_;
  std::map<std::string, bool> cache_;
  std::size_t hits_ = 0;
};

// Validate a chain in order. Each fact gets its own top-k evidence from the
// opposing pool plus the (text, verdict) pairs of every earlier chain
// element; the verdict then becomes context for the next fact.
inline std::vector<ValidationVerdict> validate_chain(const LogicChain& chain,
                                                     const Retriever& pool,
                                                     int k,
                                                     Verifier& verifier) {
  std::vector<ValidationVerdict> verdicts;
  std::vector<std::pair<std::string, bool>> prior_texts;
  std::vector<std::pair<std::string, bool>> prior_ids;
  for (const AtomicFact& fact : chain.facts) {
    std::vector<const AtomicFact*> hits = pool.top_k(fact.text, k);
    ValidationVerdict verdict;
    verdict.fact_id = fact.fact_id;
    verdict.prior_states = prior_ids;
    std::vector<std::string> evidence_texts;
    for (const AtomicFact* hit : hits) {
      verdict.evidence.push_back(hit->fact_id);
      evidence_texts.push_back(hit->text);
    }
    verdict.verdict = verifier.verify(fact.text, evidence_texts, prior_texts);
    prior_texts.emplace_back(fact.text, verdict.verdict);
    prior_ids.emplace_back(fact.fact_id, verdict.verdict);
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

inline std::vector<ValidationVerdict> validate_chain(const LogicChain& chain,
                                                     const FactSet& pool,
                                                     int k,
                                                     Verifier& verifier) {
  Retriever retriever(pool);
  return validate_chain(chain, retriever, k, verifier);
}

inline double f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

struct ValidationOutcome {
  ScoreReport report;
  std::vector<ValidationVerdict> candidate_verdicts;
  std::vector<ValidationVerdict> reference_verdicts;
};

namespace detail {

// One direction of the score: every fact of `judged` (chain facts in chain
// context, relation facts as singleton chains) validated against `pool`.
inline std::vector<ValidationVerdict> validate_set(const FactSet& judged,
                                                   const Retriever& pool,
                                                   int k, Verifier& verifier) {
  std::vector<ValidationVerdict> verdicts;
  for (const LogicChain& chain : judged.chains) {
    for (ValidationVerdict& v : validate_chain(chain, pool, k, verifier))
      verdicts.push_back(std::move(v));
  }
  for (const AtomicFact& relation : judged.relations) {
    LogicChain singleton;
    singleton.chain_id = relation.fact_id;
    singleton.facts.push_back(relation);
    for (ValidationVerdict& v : validate_chain(singleton, pool, k, verifier))
      verdicts.push_back(std::move(v));
  }
  return verdicts;
}

inline double true_fraction(const std::vector<ValidationVerdict>& verdicts,
                            std::size_t denominator) {
  std::size_t trues = 0;
  for (const ValidationVerdict& v : verdicts) trues += v.verdict ? 1 : 0;
  return static_cast<double>(trues) / static_cast<double>(denominator);
}

}  // namespace detail

// Precision: candidate facts judged against reference evidence, divided by
// |candidate|. Recall: the mirror image. Empty sets make the score
// definitional zeros, flagged on the report.
inline ValidationOutcome score_with_verdicts(const FactSet& candidate_set,
                                             const FactSet& reference_set,
                                             int k, Verifier& verifier) {
  ValidationOutcome outcome;
  outcome.report.candidate_fact_count = candidate_set.recount();
  outcome.report.reference_fact_count = reference_set.recount();
  if (outcome.report.candidate_fact_count == 0 ||
      outcome.report.reference_fact_count == 0) {
    outcome.report.empty_fact_set = true;
    return outcome;
  }
  Retriever reference_pool(reference_set);
  Retriever candidate_pool(candidate_set);
  outcome.candidate_verdicts =
      detail::validate_set(candidate_set, reference_pool, k, verifier);
  outcome.reference_verdicts =
      detail::validate_set(reference_set, candidate_pool, k, verifier);
  outcome.report.precision = detail::true_fraction(
      outcome.candidate_verdicts, outcome.report.candidate_fact_count);
  outcome.report.recall = detail::true_fraction(
      outcome.reference_verdicts, outcome.report.reference_fact_count);
  outcome.report.f1 = f1(outcome.report.precision, outcome.report.recall);
  return outcome;
}

inline ScoreReport score(const FactSet& candidate_set,
                         const FactSet& reference_set, int k,
                         Verifier& verifier) {
  return score_with_verdicts(candidate_set, reference_set, k, verifier).report;
}

}  // namespace evascore
