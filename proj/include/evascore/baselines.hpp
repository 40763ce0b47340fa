#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "evascore/gateway.hpp"
#include "evascore/tfidf.hpp"
#include "evascore/text.hpp"
#include "evascore/validation.hpp"

namespace evascore {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when a text has fewer than n tokens; scores are definitional zeros.
  bool text_too_short = false;
};

// ROUGE-n with clipped counts: each reference n-gram matches at most its
// reference multiplicity. Tokenization is the shared lowercase
// split-on-non-alphanumerics scheme.
inline RougeScore rouge_n(const std::string& candidate,
                          const std::string& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  auto grams = [n](const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> counts;
    if (tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int j = 1; j < n; ++j) {
        gram.push_back('\x1f');
        gram += tokens[i + j];
      }
      ++counts[gram];
    }
    return counts;
  };
  std::vector<std::string> cand_tokens = tokenize(candidate);
  std::vector<std::string> ref_tokens = tokenize(reference);
  RougeScore score;
  if (cand_tokens.size() < static_cast<std::size_t>(n) ||
      ref_tokens.size() < static_cast<std::size_t>(n)) {
    score.text_too_short = true;
    return score;
  }
  std::map<std::string, std::size_t> cand_grams = grams(cand_tokens);
  std::map<std::string, std::size_t> ref_grams = grams(ref_tokens);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand_grams) {
    auto it = ref_grams.find(gram);
    if (it != ref_grams.end())
      overlap += count < it->second ? count : it->second;
  }
  double cand_total = static_cast<double>(cand_tokens.size() - n + 1);
  double ref_total = static_cast<double>(ref_tokens.size() - n + 1);
  score.precision = static_cast<double>(overlap) / cand_total;
  score.recall = static_cast<double>(overlap) / ref_total;
  score.f1 = f1(score.precision, score.recall);
  return score;
}

// Cosine of the two whole-text embeddings.
inline double embedding_similarity(Gateway& gateway,
                                   const std::string& candidate,
                                   const std::string& reference,
                                   const std::string& model) {
  std::vector<double> cand = gateway.embed(model, candidate);
  std::vector<double> ref = gateway.embed(model, reference);
  return dense_cosine(cand, ref);
}

}  // namespace evascore
