// Regenerates data/mini/fixtures.jsonl: runs the scripted stand-in backend
// over the bundled mini corpus and records every gateway exchange, so the
// bundled config's replay backend covers extract, score and baselines runs
// without a network.
//
// Usage: gen_mini_fixtures <corpus.jsonl> <fixtures_out.jsonl>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "evascore/config.hpp"
#include "evascore/corpus.hpp"
#include "evascore/gateway.hpp"
#include "evascore/pipeline.hpp"
#include "support/scripted_backend.hpp"
#include "support/temp_dir.hpp"

namespace {

// Handwritten model replies for the three mini-corpus records. Keys are
// normalized sentences (facts) or normalized whole summaries (entities,
// relations); anything not listed falls back to the backend's token rules.
void author_mini_tables(testsupport::ScriptedBackend& backend) {
  auto& afg = backend.afg_responses;
  afg["Rivera opened a bakery in Lisbon."] =
      "- Rivera opened a bakery.\n- Rivera opened a bakery in Lisbon.";
  afg["The bakery won a national prize."] =
      "- The bakery won a prize.\n- The bakery won a national prize.";
  afg["Rivera opened a bakery."] = "- Rivera opened a bakery.";
  afg["The bakery won a prize."] = "- The bakery won a prize.";

  afg["Dr. Silva led a trial of compound X9 in 2021."] =
      "- Dr. Silva led a trial.\n- Dr. Silva led a trial of compound X9.\n"
      "- Dr. Silva led a trial of compound X9 in 2021.";
  afg["The compound reduced fatigue."] = "- The compound reduced fatigue.";
  afg["Dr. Silva led a trial of compound X9."] =
      "- Dr. Silva led a trial.\n- Dr. Silva led a trial of compound X9.";
  afg["The trial was run in Madrid."] = "- The trial was run in Madrid.";

  afg["Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice."] =
      "- Am\xC3\xA9lie opened a caf\xC3\xA9.\n"
      "- Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice.";
  afg["The caf\xC3\xA9 became popular."] = "- The caf\xC3\xA9 became popular.";
  afg["The caf\xC3\xA9 was unpopular."] = "- The caf\xC3\xA9 was unpopular.";

  auto& entities = backend.entity_responses;
  entities["Rivera opened a bakery in Lisbon. The bakery won a national "
           "prize."] = "[\"Rivera\", \"Lisbon\"]";
  entities["Rivera opened a bakery. The bakery won a prize."] = "[\"Rivera\"]";
  entities["Dr. Silva led a trial of compound X9 in 2021. The compound "
           "reduced fatigue."] = "[\"Dr. Silva\", \"compound X9\", \"2021\"]";
  entities["Dr. Silva led a trial of compound X9. The trial was run in "
           "Madrid."] = "[\"Dr. Silva\", \"compound X9\", \"Madrid\"]";
  entities["Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice. The caf\xC3\xA9 "
           "became popular."] = "[\"Am\xC3\xA9lie\", \"Nice\"]";
  entities["Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice. The caf\xC3\xA9 "
           "was unpopular."] = "[\"Am\xC3\xA9lie\", \"Nice\"]";

  auto& docre = backend.docre_responses;
  docre["Rivera opened a bakery in Lisbon. The bakery won a national "
        "prize."] = "('Lisbon', 'located in', 'Portugal')";
  docre["Rivera opened a bakery. The bakery won a prize."] = "";
  docre["Dr. Silva led a trial of compound X9 in 2021. The compound "
        "reduced fatigue."] =
      "('Dr. Silva', 'studied', 'fatigue')\n"
      "('Dr. Silva', 'led', 'a trial of compound X9')";
  docre["Dr. Silva led a trial of compound X9. The trial was run in "
        "Madrid."] = "";
  docre["Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice. The caf\xC3\xA9 "
        "became popular."] = "('Am\xC3\xA9lie', 'residence', 'Nice')";
  docre["Am\xC3\xA9lie opened a caf\xC3\xA9 in Nice. The caf\xC3\xA9 "
        "was unpopular."] = "('Am\xC3\xA9lie', 'residence', 'Nice')";
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: gen_mini_fixtures <corpus.jsonl> <fixtures_out.jsonl>\n";
    return 2;
  }
  std::filesystem::path corpus_path = argv[1];
  std::filesystem::path out_path = argv[2];

  evascore::IngestResult ingest = evascore::ingest_jsonl(corpus_path);
  for (const evascore::IngestIssue& issue : ingest.issues) {
    std::cerr << corpus_path.string() << ":" << issue.line_number << ": "
              << issue.message << "\n";
  }
  if (!ingest.issues.empty()) return 1;

  auto backend = std::make_shared<testsupport::ScriptedBackend>();
  author_mini_tables(*backend);

  // Mirror data/mini/config.json: everything default except k and workers.
  evascore::Config config;
  config.backend = "replay";
  config.fixtures_path = out_path.string();
  config.retrieval_k = 3;
  config.workers = 1;

  if (out_path.has_parent_path()) {
    std::filesystem::create_directories(out_path.parent_path());
  }
  std::filesystem::remove(out_path);  // recording appends; start clean

  evascore::Pipeline pipeline(config, backend);
  pipeline.gateway().record_fixtures(out_path);

  testsupport::TempDir score_dir;
  testsupport::TempDir baseline_dir;
  evascore::RunSummary score = pipeline.run(ingest.records, score_dir.path,
                                            evascore::Pipeline::Mode::kScore);
  evascore::RunSummary baselines = pipeline.run(
      ingest.records, baseline_dir.path, evascore::Pipeline::Mode::kBaselines);
  pipeline.gateway().stop_recording();

  bool ok = score.failures.empty() && baselines.failures.empty();
  for (const evascore::RecordFailure& failure : score.failures) {
    std::cerr << "score " << failure.id << ": " << failure.error << "\n";
  }
  for (const evascore::RecordFailure& failure : baselines.failures) {
    std::cerr << "baselines " << failure.id << ": " << failure.error << "\n";
  }
  if (!ok) return 1;

  std::cout << slurp(score_dir.path / "reports.txt");
  std::cout << slurp(baseline_dir.path / "baselines.txt");
  std::cout << "fixtures: " << evascore::FixtureStore::load(out_path).size()
            << " entries -> " << out_path.string() << "\n";
  return 0;
}
