#pragma once

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "evascore/errors.hpp"
#include "evascore/gateway.hpp"
#include "evascore/prompts.hpp"
#include "evascore/text.hpp"
#include "evascore/types.hpp"

namespace evascore {

// Words whose trailing period does not end a sentence.
inline const std::set<std::string>& sentence_abbreviations() {
  static const std::set<std::string> kAbbreviations = {
      "dr",  "mr",  "mrs", "ms",  "prof", "st",  "no",  "fig",
      "etc", "e.g", "i.e", "vs",  "jr",   "sr",  "inc", "ltd",
      "co",  "u.s", "u.k", "al",  "gen",  "col", "approx"};
  return kAbbreviations;
}

// Rule-based splitter over normalized text. A sentence ends at [.!?] (plus
// any directly following closing quotes/parens) when the next non-space
// character looks like a sentence start, except after known abbreviations or
// single-letter initials. Good enough for summary-length inputs; the LLM sees
// whole sentences either way.
inline std::vector<std::string> split_sentences(const std::string& text) {
  std::string norm = normalize_text(text);
  if (norm.empty()) throw EmptyInput("split_sentences: empty text");

  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    while (start < end && is_ascii_space(norm[start])) ++start;
    if (end > start) sentences.push_back(norm.substr(start, end - start));
    start = end;
  };

  std::size_t i = 0;
  while (i < norm.size()) {
    char c = norm[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < norm.size() &&
           (norm[end] == '.' || norm[end] == '!' || norm[end] == '?' ||
            norm[end] == '"' || norm[end] == '\'' || norm[end] == ')')) {
      ++end;
    }
    bool boundary = true;
    if (end < norm.size()) {
      if (!is_ascii_space(norm[end])) {
        boundary = false;  // mid-token period: decimals, URLs, "e.g."
      } else {
        std::size_t j = end;
        while (j < norm.size() && is_ascii_space(norm[j])) ++j;
        unsigned char next = j < norm.size()
                                 ? static_cast<unsigned char>(norm[j])
                                 : static_cast<unsigned char>(0);
        bool sentence_start = (next >= 'A' && next <= 'Z') ||
                              (next >= '0' && next <= '9') || next == '"' ||
                              next == '\'' || next == '(' || next >= 0x80;
        if (!sentence_start) boundary = false;
      }
    }
    if (boundary && c == '.') {
      std::size_t w = i;
      while (w > start && !is_ascii_space(norm[w - 1])) --w;
      std::string word = norm.substr(w, i - w);
      while (!word.empty() &&
             (word.front() == '(' || word.front() == '"' ||
              word.front() == '\'')) {
        word.erase(word.begin());
      }
      if (sentence_abbreviations().count(ascii_lower(word)) > 0) {
        boundary = false;
      } else if (word.size() == 1 && word[0] >= 'A' && word[0] <= 'Z') {
        boundary = false;  // initials: "J. K. Rowling"
      }
    }
    if (boundary) {
      flush(end);
      i = end;
    } else {
      i = end;
    }
  }
  flush(norm.size());
  return sentences;
}

// Keep only "- " list lines from a model reply; everything else (pre-amble,
// blank lines, stray prose) is ignored. Markers are stripped and each fact is
// normalized.
inline std::vector<std::string> parse_fact_lines(const std::string& response) {
  std::vector<std::string> facts;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    std::string line = response.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    std::size_t first = 0;
    while (first < line.size() && is_ascii_space(line[first])) ++first;
    if (line.compare(first, 2, "- ") == 0) {
      std::string fact = normalize_text(line.substr(first + 2));
      if (!fact.empty()) facts.push_back(std::move(fact));
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return facts;
}

// Atomic facts of one sentence, in response order.
struct SentenceFacts {
  std::string sentence;
  std::vector<AtomicFact> facts;
};

// One chat call per sentence. A sentence whose reply parses to zero facts
// falls back to the sentence itself as a single fact (with a warning), so no
// sentence silently disappears from the pool. Facts that repeat verbatim
// anywhere earlier in the summary are dropped; ids are assigned later, once
// chains exist.
inline std::vector<SentenceFacts> generate_atomic_facts(
    Gateway& gateway, const std::string& summary_text, Origin origin,
    const std::string& model, std::vector<std::string>* warnings = nullptr) {
  std::vector<SentenceFacts> groups;
  std::set<std::string> seen;
  for (const std::string& sentence : split_sentences(summary_text)) {
    ChatRequest request;
    request.model = model;
    request.messages = {{"user", prompts::render_afg_prompt(sentence)}};
    std::vector<std::string> texts = parse_fact_lines(gateway.chat(request));
    if (texts.empty()) {
      texts.push_back(normalize_text(sentence));
      if (warnings != nullptr) {
        warnings->push_back("no facts parsed for sentence, using sentence "
                            "as fact: " +
                            sentence);
      }
    }
    SentenceFacts group;
    group.sentence = sentence;
    for (std::string& text : texts) {
      if (!seen.insert(text).second) continue;  // repeated information
      AtomicFact fact;
      fact.text = std::move(text);
      fact.origin = origin;
      fact.kind = FactKind::kSentenceLevel;
      group.facts.push_back(std::move(fact));
    }
    if (!group.facts.empty()) groups.push_back(std::move(group));
  }
  return groups;
}

inline std::vector<AtomicFact> flatten(const std::vector<SentenceFacts>& gs) {
  std::vector<AtomicFact> out;
  for (const SentenceFacts& group : gs)
    out.insert(out.end(), group.facts.begin(), group.facts.end());
  return out;
}

}  // namespace evascore
