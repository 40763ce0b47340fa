#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evascore/errors.hpp"
#include "evascore/tfidf.hpp"
#include "evascore/types.hpp"

namespace evascore {

enum class RetrievalMeasure { kTfidf, kEmbedding };

// Ranks a fact pool against query facts. The TF-IDF model (or embeddings)
// for the pool is computed once at construction; the pool FactSet must
// outlive the retriever. Ordering: score descending, then fact_id ascending,
// so results are a deterministic total order and top-k is a prefix of
// top-(k+1).
class Retriever {
 public:
  using EmbedFn = std::function<std::vector<double>(const std::string&)>;

  explicit Retriever(const FactSet& pool,
                     RetrievalMeasure measure = RetrievalMeasure::kTfidf,
                     EmbedFn embed = nullptr)
      : facts_(pool.all_facts()), measure_(measure), embed_(std::move(embed)) {
    if (facts_.empty()) throw EmptyPool("retrieval pool has no facts");
    std::vector<std::string> docs;
    docs.reserve(facts_.size());
    for (const AtomicFact* fact : facts_) docs.push_back(fact->text);
    model_ = std::make_unique<TfidfModel>(docs);
    if (measure_ == RetrievalMeasure::kTfidf) {
      for (const std::string& doc : docs) vecs_.push_back(model_->vectorize(doc));
    } else {
      if (!embed_) {
        throw std::invalid_argument(
            "embedding retrieval requires an embed function");
      }
      for (const std::string& doc : docs) dense_.push_back(embed_(doc));
    }
  }

  std::vector<const AtomicFact*> top_k(const std::string& query, int k) const {
    if (k < 1) throw std::invalid_argument("top_k: k must be >= 1");
    std::vector<std::pair<double, const AtomicFact*>> scored;
    scored.reserve(facts_.size());
    if (measure_ == RetrievalMeasure::kTfidf) {
      TfidfModel::Vec qvec = model_->vectorize(query);
      for (std::size_t i = 0; i < facts_.size(); ++i) {
        scored.emplace_back(TfidfModel::cosine(qvec, vecs_[i]), facts_[i]);
      }
    } else {
      std::vector<double> qvec = embed_(query);
      for (std::size_t i = 0; i < facts_.size(); ++i) {
        scored.emplace_back(dense_cosine(qvec, dense_[i]), facts_[i]);
      }
    }
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second->fact_id < b.second->fact_id;
              });
    std::size_t take = std::min<std::size_t>(scored.size(),
                                             static_cast<std::size_t>(k));
    std::vector<const AtomicFact*> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
    return out;
  }

  std::size_t pool_size() const { return facts_.size(); }

 private:
  std::vector<const AtomicFact*> facts_;
  RetrievalMeasure measure_;
  EmbedFn embed_;
  std::unique_ptr<TfidfModel> model_;
  std::vector<TfidfModel::Vec> vecs_;
  std::vector<std::vector<double>> dense_;
};

inline std::vector<const AtomicFact*> top_k(const std::string& query,
                                            const FactSet& pool, int k) {
  return Retriever(pool).top_k(query, k);
}

}  // namespace evascore
