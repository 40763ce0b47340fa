#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evascore/errors.hpp"
#include "evascore/text.hpp"

namespace evascore {

// Sample Pearson correlation. Constant or too-short input is an error, not a
// zero: callers decide whether to exclude or propagate.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  std::size_t n = x.size();
  if (n < 2) throw DegenerateInput("pearson: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) {
    throw DegenerateInput("pearson: constant input");
  }
  return cov / (std::sqrt(vx) * std::sqrt(vy));
}

// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman: length mismatch");
  }
  std::vector<double> rx = average_ranks(x);
  std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

// Kendall tau-b: (C - D) / sqrt((n0 - tx)(n0 - ty)), where tx/ty count pairs
// tied in x/y respectively.
inline double kendall(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kendall: length mismatch");
  }
  std::size_t n = x.size();
  if (n < 2) throw DegenerateInput("kendall: need at least 2 points");
  double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j];
      double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ties_x += 1.0;
        ties_y += 1.0;
      } else if (dx == 0.0) {
        ties_x += 1.0;
      } else if (dy == 0.0) {
        ties_y += 1.0;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        concordant += 1.0;
      } else {
        discordant += 1.0;
      }
    }
  }
  double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double denom = std::sqrt((n0 - ties_x) * (n0 - ties_y));
  if (denom == 0.0) throw DegenerateInput("kendall: constant input");
  return (concordant - discordant) / denom;
}

struct CorrelationTriple {
  double sigma = 0.0;  // Pearson
  double gamma = 0.0;  // Spearman
  double tau = 0.0;    // Kendall tau-b
};

inline CorrelationTriple correlation_triple(std::span<const double> x,
                                            std::span<const double> y) {
  CorrelationTriple triple;
  triple.sigma = pearson(x, y);
  triple.gamma = spearman(x, y);
  triple.tau = kendall(x, y);
  return triple;
}

// Metric and human scores pivoted to records × systems. Missing cells are
// NaN; rows containing any NaN are excluded from both correlation levels.
struct ScoreMatrix {
  std::vector<std::string> record_ids;
  std::vector<std::string> systems;
  std::vector<std::vector<double>> metric;
  std::vector<std::vector<double>> human;

  bool row_complete(std::size_t row) const {
    for (double v : metric[row])
      if (std::isnan(v)) return false;
    for (double v : human[row])
      if (std::isnan(v)) return false;
    return true;
  }
};

struct LevelReport {
  std::string level;  // "text" or "system"
  CorrelationTriple coefficients;
  std::size_t rows_used = 0;
  std::size_t rows_excluded = 0;
};

inline void to_json(nlohmann::json& j, const LevelReport& r) {
  j = nlohmann::json{{"level", r.level},
                     {"sigma", r.coefficients.sigma},
                     {"gamma", r.coefficients.gamma},
                     {"tau", r.coefficients.tau},
                     {"rows_used", r.rows_used},
                     {"rows_excluded", r.rows_excluded}};
}

// Per-record correlation across systems, averaged over records. Rows that
// are incomplete or degenerate (constant scores) are excluded and counted
// rather than imputed.
inline LevelReport text_level(const ScoreMatrix& matrix) {
  LevelReport report;
  report.level = "text";
  CorrelationTriple sums;
  for (std::size_t row = 0; row < matrix.metric.size(); ++row) {
    if (!matrix.row_complete(row)) {
      ++report.rows_excluded;
      continue;
    }
    try {
      CorrelationTriple triple =
          correlation_triple(matrix.metric[row], matrix.human[row]);
      sums.sigma += triple.sigma;
      sums.gamma += triple.gamma;
      sums.tau += triple.tau;
      ++report.rows_used;
    } catch (const DegenerateInput&) {
      ++report.rows_excluded;
    }
  }
  if (report.rows_used == 0) {
    throw NoValidRows("text_level: no usable rows");
  }
  double n = static_cast<double>(report.rows_used);
  report.coefficients.sigma = sums.sigma / n;
  report.coefficients.gamma = sums.gamma / n;
  report.coefficients.tau = sums.tau / n;
  return report;
}

// Column means over complete rows, then one correlation across systems.
inline LevelReport system_level(const ScoreMatrix& matrix) {
  LevelReport report;
  report.level = "system";
  std::size_t cols = matrix.systems.size();
  std::vector<double> metric_means(cols, 0.0);
  std::vector<double> human_means(cols, 0.0);
  for (std::size_t row = 0; row < matrix.metric.size(); ++row) {
    if (!matrix.row_complete(row)) {
      ++report.rows_excluded;
      continue;
    }
    for (std::size_t col = 0; col < cols; ++col) {
      metric_means[col] += matrix.metric[row][col];
      human_means[col] += matrix.human[row][col];
    }
    ++report.rows_used;
  }
  if (report.rows_used == 0) {
    throw NoValidRows("system_level: no usable rows");
  }
  for (std::size_t col = 0; col < cols; ++col) {
    metric_means[col] /= static_cast<double>(report.rows_used);
    human_means[col] /= static_cast<double>(report.rows_used);
  }
  report.coefficients = correlation_triple(metric_means, human_means);
  return report;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

struct ScoreRow {
  std::string record_id;
  std::string system;
  double metric_score = 0.0;
  double human_score = 0.0;
};

}  // namespace detail

// Pivot {record_id, system, metric_score, human_score} rows into a
// ScoreMatrix. Accepts CSV (header required, any column order) or JSONL,
// chosen by file extension. Row and column order follow first appearance.
inline ScoreMatrix load_score_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open score table: " + path.string());
  std::vector<detail::ScoreRow> rows;
  std::string line;
  std::size_t line_no = 0;
  if (path.extension() == ".csv") {
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      ++line_no;
      if (normalize_text(line).empty()) continue;
      std::vector<std::string> fields = detail::split_csv_line(line);
      if (header.empty()) {
        for (std::string& name : fields) header.push_back(normalize_text(name));
        continue;
      }
      if (fields.size() != header.size()) {
        throw ParseError("score table line " + std::to_string(line_no) +
                         ": expected " + std::to_string(header.size()) +
                         " fields");
      }
      detail::ScoreRow row;
      bool has_metric = false, has_human = false;
      for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& value = fields[i];
        try {
          if (header[i] == "record_id") {
            row.record_id = normalize_text(value);
          } else if (header[i] == "system") {
            row.system = normalize_text(value);
          } else if (header[i] == "metric_score") {
            row.metric_score = std::stod(value);
            has_metric = true;
          } else if (header[i] == "human_score") {
            row.human_score = std::stod(value);
            has_human = true;
          }
        } catch (const std::exception&) {
          throw ParseError("score table line " + std::to_string(line_no) +
                           ": bad value for " + header[i]);
        }
      }
      if (row.record_id.empty() || row.system.empty() || !has_metric ||
          !has_human) {
        throw ParseError("score table line " + std::to_string(line_no) +
                         ": missing required fields");
      }
      rows.push_back(std::move(row));
    }
  } else {
    while (std::getline(in, line)) {
      ++line_no;
      if (normalize_text(line).empty()) continue;
      nlohmann::json entry = nlohmann::json::parse(line, nullptr, false);
      if (entry.is_discarded()) {
        throw ParseError("score table line " + std::to_string(line_no) +
                         ": invalid JSON");
      }
      try {
        detail::ScoreRow row;
        row.record_id = entry.at("record_id").get<std::string>();
        row.system = entry.at("system").get<std::string>();
        row.metric_score = entry.at("metric_score").get<double>();
        row.human_score = entry.at("human_score").get<double>();
        rows.push_back(std::move(row));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("score table line " + std::to_string(line_no) +
                         ": " + e.what());
      }
    }
  }

  ScoreMatrix matrix;
  auto index_of = [](std::vector<std::string>& labels,
                     const std::string& label) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    labels.push_back(label);
    return labels.size() - 1;
  };
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (const detail::ScoreRow& row : rows) {
    std::size_t r = index_of(matrix.record_ids, row.record_id);
    std::size_t c = index_of(matrix.systems, row.system);
    while (matrix.metric.size() < matrix.record_ids.size()) {
      matrix.metric.emplace_back(matrix.systems.size(), nan);
      matrix.human.emplace_back(matrix.systems.size(), nan);
    }
    for (auto* grid : {&matrix.metric, &matrix.human}) {
      for (std::vector<double>& grid_row : *grid) {
        while (grid_row.size() < matrix.systems.size()) grid_row.push_back(nan);
      }
    }
    matrix.metric[r][c] = row.metric_score;
    matrix.human[r][c] = row.human_score;
  }
  return matrix;
}

}  // namespace evascore
