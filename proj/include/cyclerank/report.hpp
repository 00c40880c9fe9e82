#pragma once

// Text, CSV and JSON renderings of rankings, single or side by side.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cyclerank/query.hpp"
#include "cyclerank/ranking.hpp"

namespace cyclerank {

enum class OutputMode { table, csv, json };

inline OutputMode parse_output_mode(std::string_view s) {
  if (s == "table") return OutputMode::table;
  if (s == "csv") return OutputMode::csv;
  if (s == "json") return OutputMode::json;
  throw InvalidInput("unknown output mode '" + std::string(s) + "'");
}

/// Six significant digits.
inline std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// One column of a comparison: a query and either its entries or an error.
struct Column {
  Query query;
  std::optional<std::vector<RankedEntry>> entries;
  std::string error;

  std::string title() const {
    std::string t(algorithm_name(query.algorithm));
    t += "(";
    if (query.source) t += "source=" + *query.source + ", ";
    t += query.describe_parameters() + ")";
    return t;
  }
};

/// Runs each query against g; a failing query becomes an error column.
inline std::vector<Column> run_columns(const Graph& g, const std::vector<Query>& queries) {
  std::vector<Column> out;
  for (const auto& q : queries) {
    Column c{q.normalized(), std::nullopt, {}};
    try {
      c.entries = execute(g, q).entries;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline nlohmann::json entries_json(const std::vector<RankedEntry>& entries) {
  auto list = nlohmann::json::array();
  for (const auto& e : entries) list.push_back(to_json(e));
  return list;
}

inline void render_ranking(std::ostream& out, const std::vector<RankedEntry>& entries,
                           OutputMode mode, const Query& query = {}) {
  switch (mode) {
    case OutputMode::csv:
      out << "rank,label,score\n";
      for (const auto& e : entries)
        out << e.rank << ',' << csv_field(e.label) << ',' << (e.score ? format_score(*e.score) : "")
            << '\n';
      break;
    case OutputMode::table: {
      std::size_t width = 5;
      for (const auto& e : entries) width = std::max(width, e.label.size());
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-6s", "rank");
      out << buf << std::string("label") << std::string(width - 5 + 2, ' ') << "score\n";
      for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-6zu", e.rank);
        out << buf << e.label << std::string(width - e.label.size() + 2, ' ')
            << (e.score ? format_score(*e.score) : "") << '\n';
      }
      break;
    }
    case OutputMode::json: {
      auto q = to_json(query.normalized());
      q.erase("dataset_id");
      out << nlohmann::json{{"query", q}, {"entries", entries_json(entries)}}.dump(2) << '\n';
      break;
    }
  }
}

inline void render_comparison(std::ostream& out, const std::vector<Column>& columns,
                              OutputMode mode) {
  std::size_t rows = 0;
  for (const auto& c : columns)
    rows = std::max(rows, c.entries ? c.entries->size() : std::size_t{1});

  // Label and score text for (row, column); error columns show the message
  // in their first row.
  auto cell = [&](std::size_t row, const Column& c) -> std::pair<std::string, std::string> {
    if (!c.entries) return {row == 0 ? "ERROR: " + c.error : "", ""};
    if (row >= c.entries->size()) return {"", ""};
    const auto& e = (*c.entries)[row];
    return {e.label, e.score ? format_score(*e.score) : ""};
  };

  switch (mode) {
    case OutputMode::json: {
      auto list = nlohmann::json::array();
      for (const auto& c : columns) {
        nlohmann::json col{{"title", c.title()}, {"query", to_json(c.query)}};
        col["query"].erase("dataset_id");
        col["entries"] = c.entries ? entries_json(*c.entries) : nlohmann::json(nullptr);
        col["error"] = c.entries ? nlohmann::json(nullptr) : nlohmann::json(c.error);
        list.push_back(std::move(col));
      }
      out << nlohmann::json{{"columns", list}}.dump(2) << '\n';
      break;
    }
    case OutputMode::csv: {
      out << "rank";
      for (const auto& c : columns)
        out << ',' << csv_field(c.title() + " label") << ',' << csv_field(c.title() + " score");
      out << '\n';
      for (std::size_t r = 0; r < rows; ++r) {
        out << (r + 1);
        for (const auto& c : columns) {
          auto [label, score] = cell(r, c);
          out << ',' << csv_field(label) << ',' << score;
        }
        out << '\n';
      }
      break;
    }
    case OutputMode::table: {
      std::vector<std::vector<std::string>> grid(rows + 1);
      grid[0].push_back("rank");
      for (const auto& c : columns) grid[0].push_back(c.title());
      for (std::size_t r = 0; r < rows; ++r) {
        grid[r + 1].push_back(std::to_string(r + 1));
        for (const auto& c : columns) {
          auto [label, score] = cell(r, c);
          grid[r + 1].push_back(score.empty() ? label : label + "  " + score);
        }
      }
      std::vector<std::size_t> width(columns.size() + 1, 0);
      for (const auto& row : grid)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
      for (const auto& row : grid) {
        for (std::size_t k = 0; k < row.size(); ++k) {
          out << row[k];
          if (k + 1 < row.size()) out << std::string(width[k] - row[k].size() + 3, ' ');
        }
        out << '\n';
      }
      break;
    }
  }
}

}  // namespace cyclerank
