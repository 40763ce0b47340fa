#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"
#include "evascore/types.hpp"

namespace evascore {

struct IngestIssue {
  std::size_t line_number = 0;
  std::string message;
};

struct IngestResult {
  std::vector<SummaryRecord> records;
  std::vector<IngestIssue> issues;
};

// One JSON object per line: {id, dataset, source_text, reference, candidate,
// human_score?}. Bad lines are collected as issues, not fatal; a repeated id
// replaces the earlier record (last wins) with a warning. Strict handling is
// the caller's: abort if issues is non-empty.
inline IngestResult ingest_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus: " + path.string());
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool blank = true;
    for (char c : line) {
      if (!is_ascii_space(c)) {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    nlohmann::json entry = nlohmann::json::parse(line, nullptr, false);
    if (entry.is_discarded()) {
      result.issues.push_back({line_no, "invalid JSON"});
      continue;
    }
    SummaryRecord record;
    try {
      record = entry.get<SummaryRecord>();
    } catch (const nlohmann::json::exception& e) {
      result.issues.push_back({line_no, e.what()});
      continue;
    } catch (const ParseError& e) {
      result.issues.push_back({line_no, e.what()});
      continue;
    }
    if (record.id.empty()) {
      result.issues.push_back({line_no, "empty id"});
      continue;
    }
    bool replaced = false;
    for (SummaryRecord& existing : result.records) {
      if (existing.id == record.id) {
        result.issues.push_back(
            {line_no, "duplicate id '" + record.id + "' (last wins)"});
        existing = std::move(record);
        replaced = true;
        break;
      }
    }
    if (!replaced) result.records.push_back(std::move(record));
  }
  return result;
}

}  // namespace evascore
