// evascore: atomic-fact informativeness scoring for summaries.
//
// Subcommands:
//   extract         build fact sets only (no validation)
//   score           full pipeline: facts, chains, relations, validation, F1
//   baselines       ROUGE-1/2 and embedding similarity per record
//   correlate       metric-vs-human correlations from a score table
//   record-fixtures run live and capture replay fixtures
//   replay-check    verify a corpus replays from fixtures with no misses

#include <cstdlib>
#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evascore/config.hpp"
#include "evascore/correlation.hpp"
#include "evascore/corpus.hpp"
#include "evascore/errors.hpp"
#include "evascore/gateway.hpp"
#include "evascore/gateway_live.hpp"
#include "evascore/pipeline.hpp"

namespace {

using evascore::Config;

struct CommonArgs {
  std::string config_path;
  std::string input;
  std::string output_dir = "out";
  std::string backend;
  std::string fixtures;
  int k = 0;
  int max_tokens = -1;
  bool strict = false;
  int workers = 0;
};

void add_common_flags(CLI::App* cmd, CommonArgs* args, bool needs_input) {
  cmd->add_option("--config", args->config_path, "Config JSON file");
  auto* input =
      cmd->add_option("--input", args->input, "Corpus JSONL (or score table)");
  if (needs_input) input->required();
  cmd->add_option("--output-dir", args->output_dir, "Directory for artifacts");
  cmd->add_option("--backend", args->backend, "live or replay")
      ->check(CLI::IsMember({"live", "replay"}));
  cmd->add_option("--fixtures", args->fixtures, "Replay fixtures JSONL");
  cmd->add_option("--k", args->k, "Evidence facts retrieved per judgement");
  cmd->add_option("--max-tokens", args->max_tokens,
                  "Truncation budget (0 disables)");
  cmd->add_flag("--strict", args->strict, "Fail on any ingest issue");
  cmd->add_option("--workers", args->workers, "Concurrent records");
}

Config resolve_config(const CommonArgs& args) {
  Config config;
  if (!args.config_path.empty()) config = Config::load(args.config_path);
  if (!args.backend.empty()) config.backend = args.backend;
  if (!args.fixtures.empty()) config.fixtures_path = args.fixtures;
  if (args.k > 0) config.retrieval_k = args.k;
  if (args.max_tokens >= 0) config.max_tokens = args.max_tokens;
  if (args.strict) config.strict = true;
  if (args.workers > 0) config.workers = args.workers;
  config.validate();
  return config;
}

std::shared_ptr<evascore::ChatBackend> make_backend(const Config& config) {
  if (config.backend == "replay") {
    return evascore::ReplayBackend::from_file(config.fixtures_path);
  }
  const char* key = nullptr;
  if (!config.api_key_env.empty()) key = std::getenv(config.api_key_env.c_str());
  return std::make_shared<evascore::HttpChatBackend>(
      config.chat_endpoint, config.embed_endpoint, key != nullptr ? key : "");
}

std::vector<evascore::SummaryRecord> load_corpus(const CommonArgs& args,
                                                 const Config& config) {
  evascore::IngestResult ingest = evascore::ingest_jsonl(args.input);
  for (const evascore::IngestIssue& issue : ingest.issues) {
    std::cerr << args.input << ":" << issue.line_number << ": "
              << issue.message << "\n";
  }
  if (config.strict && !ingest.issues.empty()) {
    throw evascore::ParseError(
        std::to_string(ingest.issues.size()) +
        " ingest issue(s) with --strict; aborting");
  }
  return ingest.records;
}

int finish_run(const evascore::RunSummary& summary) {
  std::cout << summary.mode << ": " << summary.succeeded << "/"
            << summary.records << " records succeeded\n";
  for (const evascore::RecordFailure& failure : summary.failures) {
    std::cerr << "record " << failure.id << " failed: " << failure.error
              << "\n";
  }
  return summary.failures.empty() ? 0 : 1;
}

int run_pipeline_command(const CommonArgs& args,
                         evascore::Pipeline::Mode mode) {
  Config config = resolve_config(args);
  evascore::Pipeline pipeline(config, make_backend(config));
  std::vector<evascore::SummaryRecord> records = load_corpus(args, config);
  return finish_run(pipeline.run(records, args.output_dir, mode));
}

int run_record_fixtures(const CommonArgs& args) {
  Config config = resolve_config(args);
  if (config.backend != "live") {
    throw evascore::ConfigError("record-fixtures requires --backend live");
  }
  if (config.fixtures_path.empty()) {
    throw evascore::ConfigError("record-fixtures requires --fixtures path");
  }
  evascore::Pipeline pipeline(config, make_backend(config));
  pipeline.gateway().record_fixtures(config.fixtures_path);
  std::vector<evascore::SummaryRecord> records = load_corpus(args, config);
  evascore::RunSummary summary =
      pipeline.run(records, args.output_dir, evascore::Pipeline::Mode::kScore);
  pipeline.gateway().stop_recording();
  std::cout << "fixtures written to " << config.fixtures_path << "\n";
  return finish_run(summary);
}

int run_replay_check(const CommonArgs& args) {
  CommonArgs replay_args = args;
  replay_args.backend = "replay";
  Config config = resolve_config(replay_args);
  evascore::FixtureStore store =
      evascore::FixtureStore::load(config.fixtures_path);
  std::size_t bad_keys = 0;
  for (const auto& [key, entry] : store.entries()) {
    if (!entry.contains("request")) continue;
    if (evascore::sha256_hex(entry.at("request").dump()) != key) {
      std::cerr << "fixture key mismatch: " << key << "\n";
      ++bad_keys;
    }
  }
  evascore::Pipeline pipeline(config, make_backend(config));
  std::vector<evascore::SummaryRecord> records = load_corpus(replay_args, config);
  evascore::RunSummary summary =
      pipeline.run(records, args.output_dir, evascore::Pipeline::Mode::kScore);
  std::size_t misses = 0;
  for (const evascore::RecordFailure& failure : summary.failures) {
    std::cerr << "record " << failure.id << ": " << failure.error << "\n";
    ++misses;
  }
  if (bad_keys == 0 && misses == 0) {
    std::cout << "replay OK: " << summary.succeeded << " records, "
              << store.size() << " fixtures, zero network calls\n";
    return 0;
  }
  return 1;
}

int run_correlate(const CommonArgs& args) {
  // No backend involved: correlate only reads a score table.
  evascore::ScoreMatrix matrix = evascore::load_score_table(args.input);
  evascore::LevelReport text = evascore::text_level(matrix);
  evascore::LevelReport system = evascore::system_level(matrix);
  std::filesystem::create_directories(args.output_dir);
  nlohmann::json out{{"text", text}, {"system", system}};
  evascore::atomic_write(std::filesystem::path(args.output_dir) /
                             "correlation.json",
                         out.dump(2) + "\n");
  std::string table = "level sigma gamma tau rows_used rows_excluded\n";
  for (const evascore::LevelReport* report : {&text, &system}) {
    table += report->level + " " +
             evascore::format3(report->coefficients.sigma) + " " +
             evascore::format3(report->coefficients.gamma) + " " +
             evascore::format3(report->coefficients.tau) + " " +
             std::to_string(report->rows_used) + " " +
             std::to_string(report->rows_excluded) + "\n";
  }
  evascore::atomic_write(
      std::filesystem::path(args.output_dir) / "correlation.txt", table);
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EVA-style informativeness scoring for long-form summaries"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* extract = app.add_subcommand("extract", "Build fact sets only");
  add_common_flags(extract, &args, true);
  CLI::App* score = app.add_subcommand("score", "Full scoring pipeline");
  add_common_flags(score, &args, true);
  CLI::App* baselines =
      app.add_subcommand("baselines", "ROUGE and embedding baselines");
  add_common_flags(baselines, &args, true);
  CLI::App* correlate =
      app.add_subcommand("correlate", "Metric/human correlation report");
  add_common_flags(correlate, &args, true);
  CLI::App* record =
      app.add_subcommand("record-fixtures", "Capture live replay fixtures");
  add_common_flags(record, &args, true);
  CLI::App* check =
      app.add_subcommand("replay-check", "Verify fixtures cover a corpus");
  add_common_flags(check, &args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (extract->parsed()) {
      return run_pipeline_command(args, evascore::Pipeline::Mode::kExtract);
    }
    if (score->parsed()) {
      return run_pipeline_command(args, evascore::Pipeline::Mode::kScore);
    }
    if (baselines->parsed()) {
      return run_pipeline_command(args, evascore::Pipeline::Mode::kBaselines);
    }
    if (correlate->parsed()) return run_correlate(args);
    if (record->parsed()) return run_record_fixtures(args);
    if (check->parsed()) return run_replay_check(args);
  } catch (const evascore::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
