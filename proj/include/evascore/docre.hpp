#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/gateway.hpp"
#include "evascore/prompts.hpp"
#include "evascore/tfidf.hpp"
#include "evascore/text.hpp"
#include "evascore/types.hpp"

namespace evascore {

// "('head', 'relation', 'tail')" -> triple; anything else -> nullopt.
inline std::optional<RelationTriple> parse_triple_line(
    const std::string& raw_line) {
  std::string line = normalize_text(raw_line);
  if (line.size() < 2 || line.front() != '(' || line.back() != ')') {
    return std::nullopt;
  }
  std::string inner = line.substr(1, line.size() - 2);
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (fields.size() < 2) {
    std::size_t sep = inner.find("', '", pos);
    if (sep == std::string::npos) return std::nullopt;
    fields.push_back(inner.substr(pos, sep - pos));
    pos = sep + 4;
  }
  fields.push_back(inner.substr(pos));
  for (std::string& field : fields) {
    if (!field.empty() && field.front() == '\'') field.erase(field.begin());
    if (!field.empty() && field.back() == '\'') field.pop_back();
    field = normalize_text(field);
  }
  if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
    return std::nullopt;  // the prompt forbids empty head/tail entities
  }
  RelationTriple triple;
  triple.head = fields[0];
  triple.relation = fields[1];
  triple.tail = fields[2];
  return triple;
}

// All well-formed triple lines, in order, exact repeats dropped.
inline std::vector<RelationTriple> parse_triples(const std::string& response) {
  std::vector<RelationTriple> triples;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    std::string line = response.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    if (auto triple = parse_triple_line(line)) {
      bool repeat = false;
      for (const RelationTriple& seen : triples) {
        if (seen.head == triple->head && seen.relation == triple->relation &&
            seen.tail == triple->tail) {
          repeat = true;
          break;
        }
      }
      if (!repeat) triples.push_back(std::move(*triple));
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return triples;
}

// Accepts a JSON array of strings, or falls back to a loose bracketed list
// ("['a', 'b']"). Deduplicates, keeps first-mention order.
inline std::vector<std::string> parse_entity_list(const std::string& response) {
  std::vector<std::string> raw;
  nlohmann::json parsed = nlohmann::json::parse(response, nullptr, false);
  if (parsed.is_array()) {
    for (const auto& item : parsed) {
      if (item.is_string()) raw.push_back(item.get<std::string>());
    }
  } else {
    std::size_t open = response.find('[');
    std::size_t close = response.rfind(']');
    if (open == std::string::npos || close == std::string::npos ||
        close <= open) {
      return {};
    }
    std::string inner = response.substr(open + 1, close - open - 1);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      std::size_t comma = inner.find(',', pos);
      std::string item = inner.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::string cleaned = normalize_text(item);
      while (!cleaned.empty() &&
             (cleaned.front() == '\'' || cleaned.front() == '"')) {
        cleaned.erase(cleaned.begin());
      }
      while (!cleaned.empty() &&
             (cleaned.back() == '\'' || cleaned.back() == '"')) {
        cleaned.pop_back();
      }
      raw.push_back(cleaned);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  std::vector<std::string> entities;
  for (std::string& entity : raw) {
    std::string norm = normalize_text(entity);
    if (norm.empty()) continue;
    bool seen = false;
    for (const std::string& existing : entities) {
      if (existing == norm) {
        seen = true;
        break;
      }
    }
    if (!seen) entities.push_back(std::move(norm));
  }
  return entities;
}

// Auxiliary call: the relation-extraction prompt needs an entity list.
inline std::vector<std::string> extract_entities(Gateway& gateway,
                                                 const std::string& text,
                                                 const std::string& model) {
  ChatRequest request;
  request.model = model;
  request.messages = {{"user", prompts::render_entity_prompt(text)}};
  return parse_entity_list(gateway.chat(request));
}

inline std::vector<RelationTriple> extract_triples(
    Gateway& gateway, const std::string& text,
    const std::vector<std::string>& entities, const std::string& model) {
  if (entities.empty()) return {};
  ChatRequest request;
  request.model = model;
  request.max_tokens = 1024;
  request.messages = {{"user", prompts::render_docre_prompt(text, entities)}};
  return parse_triples(gateway.chat(request));
}

inline std::string template_paraphrase(const RelationTriple& triple) {
  return triple.head + " " + triple.relation + " " + triple.tail + ".";
}

enum class ParaphraseMode { kTemplate, kChat };

// Fill triple.paraphrase. Chat mode asks the model for a fluent sentence but
// falls back to the template whenever the reply does not keep both entities
// verbatim (case-insensitive) on a single line.
inline void paraphrase_triple(Gateway* gateway, RelationTriple& triple,
                              ParaphraseMode mode, const std::string& model) {
  if (mode == ParaphraseMode::kChat && gateway != nullptr) {
    ChatRequest request;
    request.model = model;
    request.messages = {
        {"user",
         "Rewrite the relation triple as one short natural sentence. Keep "
         "the head entity and the tail entity exactly as written, and "
         "respond with the sentence only.\n\nTriple: ('" +
             triple.head + "', '" + triple.relation + "', '" + triple.tail +
             "')\n\nSentence:"}};
    std::string reply = normalize_text(gateway->chat(request));
    if (!reply.empty() && contains_ci(reply, triple.head) &&
        contains_ci(reply, triple.tail)) {
      triple.paraphrase = reply;
      return;
    }
  }
  triple.paraphrase = normalize_text(template_paraphrase(triple));
}

struct FilterConfig {
  double theta_tfidf = 0.6;
  double theta_embed = 0.85;
};

using EmbedFn = std::function<std::vector<double>(const std::string&)>;

struct FilterResult {
  std::vector<AtomicFact> retained;
  std::vector<std::string> dropped;  // paraphrases that were duplicates
};

// Drop every relation whose paraphrase duplicates a sentence-level fact — or
// any earlier relation — under either measure: TF-IDF cosine ≥ theta_tfidf,
// or embedding cosine ≥ theta_embed. Later relations are compared against
// all earlier relations (not just retained ones) so that each relation's
// fate depends only on the thresholds, keeping the filter monotone in both.
// Without an embedding function only the TF-IDF screen applies.
inline FilterResult filter_duplicates(
    const std::vector<RelationTriple>& relations,
    const std::vector<AtomicFact>& sentence_facts, const FilterConfig& config,
    const EmbedFn& embed, Origin origin) {
  // comparanda = sentence facts, then each already-processed paraphrase.
  std::vector<std::string> comparanda;
  for (const AtomicFact& fact : sentence_facts) comparanda.push_back(fact.text);
  std::vector<std::string> paraphrases;
  for (const RelationTriple& triple : relations)
    paraphrases.push_back(normalize_text(triple.paraphrase));

  std::vector<std::string> docs = comparanda;
  docs.insert(docs.end(), paraphrases.begin(), paraphrases.end());
  TfidfModel model(docs);

  std::vector<TfidfModel::Vec> vecs;
  for (const std::string& text : comparanda) vecs.push_back(model.vectorize(text));

  std::vector<std::vector<double>> embeds;  // lazy, parallel to comparanda
  auto ensure_embeds = [&] {
    while (embeds.size() < comparanda.size())
      embeds.push_back(embed(comparanda[embeds.size()]));
  };

  FilterResult result;
  for (const std::string& paraphrase : paraphrases) {
    TfidfModel::Vec vec = model.vectorize(paraphrase);
    bool duplicate = false;
    for (const TfidfModel::Vec& other : vecs) {
      if (TfidfModel::cosine(vec, other) >= config.theta_tfidf) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate && embed) {
      ensure_embeds();
      std::vector<double> para_embed = embed(paraphrase);
      for (const std::vector<double>& other : embeds) {
        if (dense_cosine(para_embed, other) >= config.theta_embed) {
          duplicate = true;
          break;
        }
      }
    }
    comparanda.push_back(paraphrase);
    vecs.push_back(std::move(vec));
    if (duplicate) {
      result.dropped.push_back(paraphrase);
      continue;
    }
    AtomicFact fact;
    fact.fact_id = std::string(1, origin_letter(origin)) + "R" +
                   std::to_string(result.retained.size() + 1);
    fact.text = paraphrase;
    fact.origin = origin;
    fact.kind = FactKind::kDocRelation;
    result.retained.push_back(std::move(fact));
  }
  return result;
}

}  // namespace evascore
