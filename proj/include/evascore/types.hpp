#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"
#include "evascore/text.hpp"

namespace evascore {

enum class Origin { kReference, kCandidate };
enum class FactKind { kSentenceLevel, kDocRelation };

inline char origin_letter(Origin origin) {
  return origin == Origin::kReference ? 'r' : 'c';
}

inline std::string to_string(Origin origin) {
  return origin == Origin::kReference ? "reference" : "candidate";
}

inline std::string to_string(FactKind kind) {
  return kind == FactKind::kSentenceLevel ? "sentence_level" : "doc_relation";
}

inline Origin origin_from_string(const std::string& s) {
  if (s == "reference") return Origin::kReference;
  if (s == "candidate") return Origin::kCandidate;
  throw ParseError("unknown origin: " + s);
}

inline FactKind fact_kind_from_string(const std::string& s) {
  if (s == "sentence_level") return FactKind::kSentenceLevel;
  if (s == "doc_relation") return FactKind::kDocRelation;
  throw ParseError("unknown fact kind: " + s);
}

// One summarization example: a source document, its reference summary and a
// system (candidate) summary, with an optional human informativeness score.
struct SummaryRecord {
  std::string id;
  std::string dataset;
  std::string source_text;
  std::string reference;
  std::string candidate;
  std::optional<double> human_score;
};

// A single declarative statement extracted from a summary. Sentence-level
// facts carry ids like "r2.1" (origin letter, chain index, position in
// chain); document-level relation facts use "r" + "R" + index, e.g. "rR3".
struct AtomicFact {
  std::string fact_id;
  std::string text;
  Origin origin = Origin::kReference;
  FactKind kind = FactKind::kSentenceLevel;
};

// Facts from one sentence, ordered so each fact was judged to entail the one
// before it; shorter facts come first.
struct LogicChain {
  std::string chain_id;
  std::vector<AtomicFact> facts;
};

struct RelationTriple {
  std::string head;
  std::string relation;
  std::string tail;
  std::string paraphrase;
};

// Everything extracted from one summary: sentence-level facts grouped into
// logic chains plus retained document-level relation facts.
struct FactSet {
  Origin origin = Origin::kReference;
  std::vector<LogicChain> chains;
  std::vector<AtomicFact> relations;
  std::size_t total_facts = 0;

  std::size_t recount() const {
    std::size_t n = relations.size();
    for (const LogicChain& chain : chains) n += chain.facts.size();
    return n;
  }

  // Chain facts in chain order, then relation facts.
  std::vector<const AtomicFact*> all_facts() const {
    std::vector<const AtomicFact*> out;
    out.reserve(total_facts);
    for (const LogicChain& chain : chains)
      for (const AtomicFact& fact : chain.facts) out.push_back(&fact);
    for (const AtomicFact& fact : relations) out.push_back(&fact);
    return out;
  }
};

// Outcome of validating one fact against retrieved evidence.
struct ValidationVerdict {
  std::string fact_id;
  bool verdict = false;
  std::vector<std::string> evidence;  // fact ids of the retrieved support
  std::vector<std::pair<std::string, bool>> prior_states;
};

struct ScoreReport {
  std::string record_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t candidate_fact_count = 0;
  std::size_t reference_fact_count = 0;
  // True when either fact set came out empty and the zeros above are
  // definitional rather than measured.
  bool empty_fact_set = false;
};

// Structural checks on a FactSet. Returns human-readable violations; empty
// means the set is well formed.
inline std::vector<std::string> validate_fact_set(const FactSet& set) {
  std::vector<std::string> violations;
  std::size_t counted = set.recount();
  if (counted != set.total_facts) {
    violations.push_back("total_facts=" + std::to_string(set.total_facts) +
                         " but counted " + std::to_string(counted));
  }
  std::vector<std::string> seen_ids;
  auto check_fact = [&](const AtomicFact& fact, FactKind expected,
                        const std::string& where) {
    for (const std::string& id : seen_ids) {
      if (id == fact.fact_id) {
        violations.push_back("duplicate fact_id " + fact.fact_id);
        break;
      }
    }
    seen_ids.push_back(fact.fact_id);
    if (fact.fact_id.empty()) violations.push_back("empty fact_id in " + where);
    if (fact.kind != expected) {
      violations.push_back("fact " + fact.fact_id + " in " + where +
                           " has wrong kind " + to_string(fact.kind));
    }
    if (fact.text.empty()) {
      violations.push_back("fact " + fact.fact_id + " has empty text");
    } else if (fact.text.find('\n') != std::string::npos) {
      violations.push_back("fact " + fact.fact_id + " spans multiple lines");
    } else if (fact.text.rfind("- ", 0) == 0) {
      violations.push_back("fact " + fact.fact_id +
                           " still carries a list marker");
    }
  };
  for (const LogicChain& chain : set.chains) {
    if (chain.facts.empty()) {
      violations.push_back("empty chain " + chain.chain_id);
      continue;
    }
    for (const AtomicFact& fact : chain.facts)
      check_fact(fact, FactKind::kSentenceLevel, "chain " + chain.chain_id);
  }
  for (const AtomicFact& fact : set.relations)
    check_fact(fact, FactKind::kDocRelation, "relations");
  return violations;
}

// --- JSON bindings (snake_case keys) ---------------------------------------

inline void to_json(nlohmann::json& j, const SummaryRecord& r) {
  j = nlohmann::json{{"id", r.id},
                     {"dataset", r.dataset},
                     {"source_text", r.source_text},
                     {"reference", r.reference},
                     {"candidate", r.candidate}};
  if (r.human_score) j["human_score"] = *r.human_score;
}

inline void from_json(const nlohmann::json& j, SummaryRecord& r) {
  j.at("id").get_to(r.id);
  j.at("dataset").get_to(r.dataset);
  j.at("source_text").get_to(r.source_text);
  j.at("reference").get_to(r.reference);
  j.at("candidate").get_to(r.candidate);
  if (j.contains("human_score") && !j.at("human_score").is_null()) {
    r.human_score = j.at("human_score").get<double>();
  } else {
    r.human_score.reset();
  }
}

inline void to_json(nlohmann::json& j, const AtomicFact& f) {
  j = nlohmann::json{{"fact_id", f.fact_id},
                     {"text", f.text},
                     {"origin", to_string(f.origin)},
                     {"kind", to_string(f.kind)}};
}

inline void from_json(const nlohmann::json& j, AtomicFact& f) {
  j.at("fact_id").get_to(f.fact_id);
  j.at("text").get_to(f.text);
  f.origin = origin_from_string(j.at("origin").get<std::string>());
  f.kind = fact_kind_from_string(j.at("kind").get<std::string>());
}

inline void to_json(nlohmann::json& j, const LogicChain& c) {
  j = nlohmann::json{{"chain_id", c.chain_id}, {"facts", c.facts}};
}

inline void from_json(const nlohmann::json& j, LogicChain& c) {
  j.at("chain_id").get_to(c.chain_id);
  j.at("facts").get_to(c.facts);
}

inline void to_json(nlohmann::json& j, const RelationTriple& t) {
  j = nlohmann::json{{"head", t.head},
                     {"relation", t.relation},
                     {"tail", t.tail},
                     {"paraphrase", t.paraphrase}};
}

inline void from_json(const nlohmann::json& j, RelationTriple& t) {
  j.at("head").get_to(t.head);
  j.at("relation").get_to(t.relation);
  j.at("tail").get_to(t.tail);
  t.paraphrase = j.value("paraphrase", "");
}

inline void to_json(nlohmann::json& j, const FactSet& s) {
  j = nlohmann::json{{"origin", to_string(s.origin)},
                     {"chains", s.chains},
                     {"relations", s.relations},
                     {"total_facts", s.total_facts}};
}

inline void from_json(const nlohmann::json& j, FactSet& s) {
  s.origin = origin_from_string(j.at("origin").get<std::string>());
  j.at("chains").get_to(s.chains);
  j.at("relations").get_to(s.relations);
  j.at("total_facts").get_to(s.total_facts);
}

inline void to_json(nlohmann::json& j, const ValidationVerdict& v) {
  nlohmann::json priors = nlohmann::json::array();
  for (const auto& [fact_id, verdict] : v.prior_states) {
    priors.push_back({{"fact_id", fact_id}, {"verdict", verdict}});
  }
  j = nlohmann::json{{"fact_id", v.fact_id},
                     {"verdict", v.verdict},
                     {"evidence", v.evidence},
                     {"prior_states", priors}};
}

inline void from_json(const nlohmann::json& j, ValidationVerdict& v) {
  j.at("fact_id").get_to(v.fact_id);
  j.at("verdict").get_to(v.verdict);
  j.at("evidence").get_to(v.evidence);
  v.prior_states.clear();
  for (const auto& item : j.at("prior_states")) {
    v.prior_states.emplace_back(item.at("fact_id").get<std::string>(),
                                item.at("verdict").get<bool>());
  }
}

inline void to_json(nlohmann::json& j, const ScoreReport& r) {
  j = nlohmann::json{{"record_id", r.record_id},
                     {"precision", r.precision},
                     {"recall", r.recall},
                     {"f1", r.f1},
                     {"candidate_fact_count", r.candidate_fact_count},
                     {"reference_fact_count", r.reference_fact_count},
                     {"empty_fact_set", r.empty_fact_set}};
}

inline void from_json(const nlohmann::json& j, ScoreReport& r) {
  j.at("record_id").get_to(r.record_id);
  j.at("precision").get_to(r.precision);
  j.at("recall").get_to(r.recall);
  j.at("f1").get_to(r.f1);
  j.at("candidate_fact_count").get_to(r.candidate_fact_count);
  j.at("reference_fact_count").get_to(r.reference_fact_count);
  r.empty_fact_set = j.value("empty_fact_set", false);
}

}  // namespace evascore
