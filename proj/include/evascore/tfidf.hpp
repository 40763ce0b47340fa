#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "evascore/text.hpp"

namespace evascore {

// Bag-of-words TF-IDF with smoothed idf: tf is the raw in-document count and
// idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the fitted corpus. Terms not
// seen at fit time are ignored at vectorize time. Ordered maps keep float
// accumulation order deterministic.
class TfidfModel {
 public:
  using Vec = std::map<std::string, double>;

  explicit TfidfModel(const std::vector<std::string>& docs) {
    std::map<std::string, std::size_t> df;
    for (const std::string& doc : docs) {
      std::set<std::string> seen;
      for (std::string& tok : tokenize(doc)) seen.insert(std::move(tok));
      for (const std::string& tok : seen) ++df[tok];
    }
    double n = static_cast<double>(docs.size());
    for (const auto& [term, count] : df) {
      idf_[term] =
          std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0;
    }
  }

  Vec vectorize(const std::string& text) const {
    std::map<std::string, std::size_t> counts;
    for (std::string& tok : tokenize(text)) ++counts[std::move(tok)];
    Vec out;
    for (const auto& [term, count] : counts) {
      auto it = idf_.find(term);
      if (it != idf_.end()) out[term] = static_cast<double>(count) * it->second;
    }
    return out;
  }

  static double cosine(const Vec& a, const Vec& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [term, value] : a) {
      na += value * value;
      auto it = b.find(term);
      if (it != b.end()) dot += value * it->second;
    }
    for (const auto& [term, value] : b) nb += value * value;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  }

  double similarity(const std::string& a, const std::string& b) const {
    return cosine(vectorize(a), vectorize(b));
  }

  std::size_t vocabulary_size() const { return idf_.size(); }

 private:
  std::map<std::string, double> idf_;
};

// Cosine over dense vectors (embeddings). Zero when either norm is zero;
// mismatched lengths compare over the shorter prefix.
inline double dense_cosine(std::span<const double> a,
                           std::span<const double> b) {
  std::size_t n = a.size() < b.size() ? a.size() : b.size();
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
  double na = 0.0;
  for (double v : a) na += v * v;
  double nb = 0.0;
  for (double v : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace evascore
