#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/afcg.hpp"
#include "evascore/afg.hpp"
#include "evascore/baselines.hpp"
#include "evascore/config.hpp"
#include "evascore/corpus.hpp"
#include "evascore/docre.hpp"
#include "evascore/gateway.hpp"
#include "evascore/retrieval.hpp"
#include "evascore/text.hpp"
#include "evascore/types.hpp"
#include "evascore/validation.hpp"

namespace evascore {

// Chain ids "rC1", "rC2", ...; fact ids "r1.1" (chain 1, position 1).
// Relation facts keep the "rR1" ids assigned by the dedup filter.
inline void assign_fact_ids(FactSet& set) {
  std::string letter(1, origin_letter(set.origin));
  for (std::size_t ci = 0; ci < set.chains.size(); ++ci) {
    LogicChain& chain = set.chains[ci];
    chain.chain_id = letter + "C" + std::to_string(ci + 1);
    for (std::size_t p = 0; p < chain.facts.size(); ++p) {
      chain.facts[p].fact_id =
          letter + std::to_string(ci + 1) + "." + std::to_string(p + 1);
    }
  }
}

// Full extraction for one summary: sentence-wise atomic facts, chain
// grouping, then document-level relations screened against the sentence
// facts. An empty summary yields an empty set (the scoring rule turns that
// into a flagged zero report).
inline FactSet build_fact_set(Gateway& gateway, const Config& config,
                              const std::string& summary, Origin origin,
                              std::vector<std::string>* warnings = nullptr) {
  FactSet set;
  set.origin = origin;
  std::string text = normalize_text(summary);
  if (text.empty()) {
    if (warnings != nullptr) {
      warnings->push_back(std::string("empty ") + to_string(origin) +
                          " summary");
    }
    return set;
  }
  if (config.max_tokens > 0) {
    text = truncate_middle(text, static_cast<std::size_t>(config.max_tokens));
  }

  std::vector<SentenceFacts> groups =
      generate_atomic_facts(gateway, text, origin, config.afg_model, warnings);
  for (SentenceFacts& group : groups) {
    for (LogicChain& chain :
         build_chains(gateway, std::move(group.facts), config.afcg_model,
                      warnings)) {
      set.chains.push_back(std::move(chain));
    }
  }
  assign_fact_ids(set);

  std::vector<std::string> entities =
      extract_entities(gateway, text, config.docre_model);
  std::vector<RelationTriple> triples;
  if (!entities.empty()) {
    triples = extract_triples(gateway, text, entities, config.docre_model);
  }
  ParaphraseMode mode = config.paraphrase_mode == "chat"
                            ? ParaphraseMode::kChat
                            : ParaphraseMode::kTemplate;
  for (RelationTriple& triple : triples) {
    paraphrase_triple(&gateway, triple, mode, config.docre_model);
  }
  std::vector<AtomicFact> sentence_facts;
  for (const LogicChain& chain : set.chains) {
    sentence_facts.insert(sentence_facts.end(), chain.facts.begin(),
                          chain.facts.end());
  }
  FilterConfig filter{config.theta_tfidf, config.theta_embed};
  EmbedFn embed = [&gateway, &config](const std::string& s) {
    return gateway.embed(config.embed_model, s);
  };
  set.relations =
      filter_duplicates(triples, sentence_facts, filter, embed, origin)
          .retained;
  set.total_facts = set.recount();
  return set;
}

struct RecordArtifacts {
  SummaryRecord record;
  FactSet reference_set;
  FactSet candidate_set;
  AblationStats reference_stats;
  AblationStats candidate_stats;
  ScoreReport report;
  std::vector<ValidationVerdict> candidate_verdicts;
  std::vector<ValidationVerdict> reference_verdicts;
  std::vector<std::string> warnings;
  bool scored = false;
};

struct BaselineRow {
  std::string record_id;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double embedding = 0.0;
  bool text_too_short = false;
};

inline void to_json(nlohmann::json& j, const BaselineRow& row) {
  j = nlohmann::json{{"record_id", row.record_id},
                     {"rouge1", row.rouge1},
                     {"rouge2", row.rouge2},
                     {"embedding_similarity", row.embedding},
                     {"text_too_short", row.text_too_short}};
}

struct RecordFailure {
  std::string id;
  std::string error;
};

struct RunSummary {
  std::string mode;
  std::size_t records = 0;
  std::size_t succeeded = 0;
  std::vector<RecordFailure> failures;
  GatewayStats gateway;
};

inline void to_json(nlohmann::json& j, const RunSummary& summary) {
  nlohmann::json failed = nlohmann::json::array();
  for (const RecordFailure& failure : summary.failures) {
    failed.push_back({{"id", failure.id}, {"error", failure.error}});
  }
  j = nlohmann::json{{"mode", summary.mode},
                     {"records", summary.records},
                     {"succeeded", summary.succeeded},
                     {"failed", failed},
                     {"gateway", summary.gateway}};
}

// Temp-file-and-rename so readers never observe a half-written report.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string format3(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

inline std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id) {
    bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(safe ? c : '_');
  }
  return out;
}

class Pipeline {
 public:
  Pipeline(Config config, std::shared_ptr<ChatBackend> backend)
      : config_(std::move(config)),
        gateway_(std::move(backend),
                 GatewayConfig{config_.max_concurrency, config_.cache_path,
                               config_.max_attempts, config_.retry_base_ms}) {}

  const Config& config() const { return config_; }
  Gateway& gateway() { return gateway_; }

  RecordArtifacts extract_record(const SummaryRecord& record) {
    RecordArtifacts artifacts;
    artifacts.record = record;
    artifacts.reference_set =
        build_fact_set(gateway_, config_, record.reference, Origin::kReference,
                       &artifacts.warnings);
    artifacts.candidate_set =
        build_fact_set(gateway_, config_, record.candidate, Origin::kCandidate,
                       &artifacts.warnings);
    artifacts.reference_stats = chain_reduction_stats(artifacts.reference_set);
    artifacts.candidate_stats = chain_reduction_stats(artifacts.candidate_set);
    for (const FactSet* set :
         {&artifacts.reference_set, &artifacts.candidate_set}) {
      for (const std::string& violation : validate_fact_set(*set)) {
        artifacts.warnings.push_back("fact set violation: " + violation);
      }
    }
    return artifacts;
  }

  RecordArtifacts score_record(const SummaryRecord& record) {
    RecordArtifacts artifacts = extract_record(record);
    ChatVerifier chat_verifier(gateway_, config_.validation_model);
    CachingVerifier verifier(chat_verifier);
    ValidationOutcome outcome =
        score_with_verdicts(artifacts.candidate_set, artifacts.reference_set,
                            config_.retrieval_k, verifier);
    artifacts.report = outcome.report;
    artifacts.report.record_id = record.id;
    artifacts.candidate_verdicts = std::move(outcome.candidate_verdicts);
    artifacts.reference_verdicts = std::move(outcome.reference_verdicts);
    artifacts.scored = true;
    return artifacts;
  }

  BaselineRow baseline_record(const SummaryRecord& record) {
    BaselineRow row;
    row.record_id = record.id;
    RougeScore r1 = rouge_n(record.candidate, record.reference, 1);
    RougeScore r2 = rouge_n(record.candidate, record.reference, 2);
    row.rouge1 = r1.f1;
    row.rouge2 = r2.f1;
    row.text_too_short = r1.text_too_short || r2.text_too_short;
    row.embedding = embedding_similarity(gateway_, record.candidate,
                                         record.reference, config_.embed_model);
    return row;
  }

  enum class Mode { kExtract, kScore, kBaselines };

  // Process every record (isolating failures), then write all artifacts
  // under output_dir. Records run concurrently on `workers` threads; the
  // file layout and contents depend only on (corpus, fixtures, config).
  RunSummary run(const std::vector<SummaryRecord>& records,
                 const std::filesystem::path& output_dir, Mode mode) {
    RunSummary summary;
    summary.mode = mode == Mode::kExtract
                       ? "extract"
                       : (mode == Mode::kScore ? "score" : "baselines");
    summary.records = records.size();

    std::vector<std::optional<RecordArtifacts>> artifacts(records.size());
    std::vector<std::optional<BaselineRow>> baseline_rows(records.size());
    std::vector<std::optional<RecordFailure>> failures(records.size());
    std::atomic<std::size_t> next{0};
    int worker_count = config_.workers > 0 ? config_.workers : 1;
    auto work = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= records.size()) break;
        try {
          if (mode == Mode::kBaselines) {
            baseline_rows[i] = baseline_record(records[i]);
          } else if (mode == Mode::kScore) {
            artifacts[i] = score_record(records[i]);
          } else {
            artifacts[i] = extract_record(records[i]);
          }
        } catch (const std::exception& e) {
          failures[i] = RecordFailure{records[i].id, e.what()};
        }
      }
    };
    if (worker_count == 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (int t = 0; t < worker_count; ++t) threads.emplace_back(work);
      for (std::thread& thread : threads) thread.join();
    }

    std::filesystem::create_directories(output_dir);
    if (mode == Mode::kBaselines) {
      write_baselines(records, baseline_rows, output_dir);
    } else {
      write_records(records, artifacts, output_dir, mode == Mode::kScore);
    }
    write_lengths(records, output_dir);

    for (std::size_t i = 0; i < records.size(); ++i) {
      if (failures[i].has_value()) {
        summary.failures.push_back(*failures[i]);
      } else {
        ++summary.succeeded;
      }
    }
    summary.gateway = gateway_.stats();
    atomic_write(output_dir / "run_summary.json",
                 nlohmann::json(summary).dump(2) + "\n");
    return summary;
  }

 private:
  void write_records(const std::vector<SummaryRecord>& records,
                     const std::vector<std::optional<RecordArtifacts>>& all,
                     const std::filesystem::path& output_dir, bool scored) {
    nlohmann::json reports = nlohmann::json::array();
    std::string table =
        "record_id precision recall f1 candidate_facts reference_facts\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!all[i].has_value()) continue;
      const RecordArtifacts& artifacts = *all[i];
      std::filesystem::path dir =
          output_dir / "records" / sanitize_id(records[i].id);
      std::filesystem::create_directories(dir);
      atomic_write(dir / "reference_facts.json",
                   nlohmann::json(artifacts.reference_set).dump(2) + "\n");
      atomic_write(dir / "candidate_facts.json",
                   nlohmann::json(artifacts.candidate_set).dump(2) + "\n");
      nlohmann::json stats{
          {"reference",
           {{"facts", artifacts.reference_stats.facts},
            {"chains", artifacts.reference_stats.chains},
            {"relations", artifacts.reference_stats.relations}}},
          {"candidate",
           {{"facts", artifacts.candidate_stats.facts},
            {"chains", artifacts.candidate_stats.chains},
            {"relations", artifacts.candidate_stats.relations}}},
          {"warnings", artifacts.warnings}};
      atomic_write(dir / "stats.json", stats.dump(2) + "\n");
      if (scored) {
        atomic_write(dir / "report.json",
                     nlohmann::json(artifacts.report).dump(2) + "\n");
        nlohmann::json verdicts{
            {"candidate", artifacts.candidate_verdicts},
            {"reference", artifacts.reference_verdicts}};
        atomic_write(dir / "verdicts.json", verdicts.dump(2) + "\n");
        reports.push_back(artifacts.report);
        table += records[i].id + " " + format3(artifacts.report.precision) +
                 " " + format3(artifacts.report.recall) + " " +
                 format3(artifacts.report.f1) + " " +
                 std::to_string(artifacts.report.candidate_fact_count) + " " +
                 std::to_string(artifacts.report.reference_fact_count) + "\n";
      }
    }
    if (scored) {
      atomic_write(output_dir / "reports.json", reports.dump(2) + "\n");
      atomic_write(output_dir / "reports.txt", table);
    }
  }

  void write_baselines(const std::vector<SummaryRecord>& records,
                       const std::vector<std::optional<BaselineRow>>& rows,
                       const std::filesystem::path& output_dir) {
    nlohmann::json out = nlohmann::json::array();
    std::string table = "record_id rouge1 rouge2 embedding\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!rows[i].has_value()) continue;
      out.push_back(*rows[i]);
      table += rows[i]->record_id + " " + format3(rows[i]->rouge1) + " " +
               format3(rows[i]->rouge2) + " " + format3(rows[i]->embedding) +
               "\n";
    }
    atomic_write(output_dir / "baselines.json", out.dump(2) + "\n");
    atomic_write(output_dir / "baselines.txt", table);
  }

  // Mean whitespace-token lengths per dataset, mirroring the usual corpus
  // statistics table.
  void write_lengths(const std::vector<SummaryRecord>& records,
                     const std::filesystem::path& output_dir) {
    struct Sums {
      std::size_t n = 0;
      std::size_t source = 0, reference = 0, candidate = 0;
    };
    std::map<std::string, Sums> by_dataset;
    for (const SummaryRecord& record : records) {
      Sums& sums = by_dataset[record.dataset];
      ++sums.n;
      sums.source += token_count(record.source_text);
      sums.reference += token_count(record.reference);
      sums.candidate += token_count(record.candidate);
    }
    nlohmann::json out = nlohmann::json::array();
    std::string table =
        "dataset records source_tokens reference_tokens candidate_tokens\n";
    for (const auto& [dataset, sums] : by_dataset) {
      double n = static_cast<double>(sums.n);
      double source = static_cast<double>(sums.source) / n;
      double reference = static_cast<double>(sums.reference) / n;
      double candidate = static_cast<double>(sums.candidate) / n;
      out.push_back({{"dataset", dataset},
                     {"records", sums.n},
                     {"mean_source_tokens", source},
                     {"mean_reference_tokens", reference},
                     {"mean_candidate_tokens", candidate}});
      table += dataset + " " + std::to_string(sums.n) + " " + format3(source) +
               " " + format3(reference) + " " + format3(candidate) + "\n";
    }
    atomic_write(output_dir / "lengths.json", out.dump(2) + "\n");
    atomic_write(output_dir / "lengths.txt", table);
  }

  Config config_;
  Gateway gateway_;
};

}  // namespace evascore
