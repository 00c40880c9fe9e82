#pragma once

// A query is one (dataset, algorithm, parameters) triple. This header
// validates queries, runs them against a loaded graph, and converts them to
// and from the JSON wire format shared by the CLI and the HTTP service.

#include <array>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cyclerank/cycles.hpp"
#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/rank_walk.hpp"
#include "cyclerank/ranking.hpp"

namespace cyclerank {

enum class Algorithm {
  cyclerank,
  pagerank,
  personalized_pagerank,
  cheirank,
  personalized_cheirank,
  two_d_rank,
  personalized_two_d_rank,
};

inline constexpr std::array kAllAlgorithms = {
    Algorithm::cyclerank,     Algorithm::pagerank,
    Algorithm::personalized_pagerank, Algorithm::cheirank,
    Algorithm::personalized_cheirank, Algorithm::two_d_rank,
    Algorithm::personalized_two_d_rank,
};

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::cyclerank: return "cyclerank";
    case Algorithm::pagerank: return "pagerank";
    case Algorithm::personalized_pagerank: return "personalized_pagerank";
    case Algorithm::cheirank: return "cheirank";
    case Algorithm::personalized_cheirank: return "personalized_cheirank";
    case Algorithm::two_d_rank: return "2drank";
    case Algorithm::personalized_two_d_rank: return "personalized_2drank";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
  for (auto a : kAllAlgorithms)
    if (algorithm_name(a) == name) return a;
  throw InvalidInput("unknown algorithm '" + std::string(name) + "'");
}

/// Algorithms that need a source node.
inline bool needs_source(Algorithm a) {
  return a == Algorithm::cyclerank || a == Algorithm::personalized_pagerank ||
         a == Algorithm::personalized_cheirank || a == Algorithm::personalized_two_d_rank;
}

inline bool is_walk(Algorithm a) { return a != Algorithm::cyclerank; }

struct Query {
  static constexpr std::size_t kDefaultTopK = 50;

  std::string dataset_id;
  Algorithm algorithm = Algorithm::pagerank;
  std::optional<std::string> source;
  // Walk algorithms only.
  std::optional<double> alpha;
  // CycleRank only.
  std::optional<int> max_length;
  std::optional<Scoring> sigma;
  std::size_t top_k = kDefaultTopK;

  /// Every rule violation, empty when the query is valid. Source labels are
  /// not resolved here.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    if (needs_source(algorithm) && (!source || source->empty()))
      out.push_back(std::string(algorithm_name(algorithm)) + " requires a source node");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
      out.push_back("alpha must be in (0, 1), got " + std::to_string(*alpha));
    if (max_length && (*max_length < 2 || *max_length > CycleRankParams::kMaxSafeLength))
      out.push_back("K must be in [2, " + std::to_string(CycleRankParams::kMaxSafeLength) +
                    "], got " + std::to_string(*max_length));
    if (is_walk(algorithm) && (max_length || sigma))
      out.push_back("K and sigma apply only to cyclerank");
    if (!is_walk(algorithm) && alpha) out.push_back("alpha does not apply to cyclerank");
    if (top_k < 1) out.push_back("top_k must be at least 1");
    return out;
  }

  void validate() const {
    auto p = problems();
    if (p.empty()) return;
    std::string msg = p.front();
    for (std::size_t i = 1; i < p.size(); ++i) msg += "; " + p[i];
    throw InvalidInput(msg);
  }

  /// Copy with every defaulted parameter made explicit.
  Query normalized() const {
    Query q = *this;
    if (is_walk(q.algorithm)) {
      if (!q.alpha) q.alpha = WalkParams::kDefaultAlpha;
    } else {
      if (!q.max_length) q.max_length = CycleRankParams::kDefaultMaxLength;
      if (!q.sigma) q.sigma = Scoring::exponential;
    }
    if (!needs_source(q.algorithm)) q.source.reset();
    return q;
  }

  /// Short parameter summary, e.g. "K=3, sigma=exponential".
  std::string describe_parameters() const {
    const Query q = normalized();
    std::ostringstream out;
    if (is_walk(q.algorithm)) out << "alpha=" << *q.alpha;
    else out << "K=" << *q.max_length << ", sigma=" << scoring_name(*q.sigma);
    return out.str();
  }

  friend bool operator==(const Query&, const Query&) = default;
};

struct QueryOutcome {
  std::vector<RankedEntry> entries;
  // One line describing the run, for the task log.
  std::string summary;
};

/// Runs q against g. Throws NotFoundError for an unknown source label and
/// InvalidInput for rule violations.
inline QueryOutcome execute(const Graph& g, const Query& query, std::stop_token stop = {},
                            EnumerateOptions cycle_opts = {}) {
  query.validate();
  const Query q = query.normalized();
  std::optional<NodeId> ref;
  if (q.source) ref = resolve_node(g, *q.source);

  QueryOutcome out;
  std::ostringstream summary;
  summary << algorithm_name(q.algorithm) << " on " << g.node_count() << " nodes, "
          << g.edge_count() << " edges";

  if (q.algorithm == Algorithm::cyclerank) {
    CycleRankParams p{*ref, *q.max_length, *q.sigma};
    auto s = cyclerank(g, p, cycle_opts, stop);
    out.entries = top_k(g, s, q.top_k);
    out.summary = summary.str();
    return out;
  }

  WalkParams p;
  p.alpha = *q.alpha;
  p.reference = ref;
  auto walk_summary = [&](const WalkScores& s) {
    summary << "; " << s.algorithm << (s.params.converged ? " converged" : " did not converge")
            << " after " << s.params.iterations << " iterations (residual " << s.params.residual
            << ")";
  };

  switch (q.algorithm) {
    case Algorithm::pagerank:
    case Algorithm::personalized_pagerank:
    case Algorithm::cheirank:
    case Algorithm::personalized_cheirank: {
      WalkScores s;
      if (q.algorithm == Algorithm::pagerank) s = pagerank(g, p, stop);
      else if (q.algorithm == Algorithm::personalized_pagerank) s = personalized_pagerank(g, p, stop);
      else if (q.algorithm == Algorithm::cheirank) s = cheirank(g, p, stop);
      else s = personalized_cheirank(g, p, stop);
      walk_summary(s);
      out.entries = top_k(g, s, q.top_k);
      break;
    }
    case Algorithm::two_d_rank:
      out.entries = top_k(g, two_d_rank(g, p, stop), q.top_k);
      break;
    case Algorithm::personalized_two_d_rank:
      out.entries = top_k(g, personalized_two_d_rank(g, p, stop), q.top_k);
      break;
    case Algorithm::cyclerank:
      break;
  }
  out.summary = summary.str();
  return out;
}

// JSON wire format.

inline nlohmann::json to_json(const RankedEntry& e) {
  nlohmann::json j{{"rank", e.rank}, {"label", e.label}};
  j["score"] = e.score ? nlohmann::json(*e.score) : nlohmann::json(nullptr);
  return j;
}

inline RankedEntry entry_from_json(const nlohmann::json& j) {
  RankedEntry e;
  e.rank = j.at("rank").get<std::size_t>();
  e.label = j.at("label").get<std::string>();
  if (j.contains("score") && !j["score"].is_null()) e.score = j["score"].get<double>();
  return e;
}

inline nlohmann::json to_json(const Query& q) {
  nlohmann::json params = nlohmann::json::object();
  if (q.alpha) params["alpha"] = *q.alpha;
  if (q.max_length) params["K"] = *q.max_length;
  if (q.sigma) params["sigma"] = std::string(scoring_name(*q.sigma));
  nlohmann::json j{
      {"dataset_id", q.dataset_id},
      {"algorithm", std::string(algorithm_name(q.algorithm))},
      {"parameters", params},
      {"top_k", q.top_k},
  };
  j["source"] = q.source ? nlohmann::json(*q.source) : nlohmann::json(nullptr);
  return j;
}

/// Reads a query from JSON. Structural problems (wrong types, unknown
/// names or keys) throw InvalidInput; range checks are left to problems().
inline Query query_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("query must be a JSON object");
  Query q;
  try {
    q.dataset_id = j.at("dataset_id").get<std::string>();
    q.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    if (j.contains("source") && !j["source"].is_null()) q.source = j["source"].get<std::string>();
    if (j.contains("top_k")) {
      const auto k = j["top_k"].get<long long>();
      if (k < 1) throw InvalidInput("top_k must be at least 1");
      q.top_k = static_cast<std::size_t>(k);
    }
    if (j.contains("parameters") && !j["parameters"].is_null()) {
      const auto& params = j["parameters"];
      if (!params.is_object()) throw InvalidInput("parameters must be an object");
      for (const auto& [key, value] : params.items()) {
        if (key == "alpha") q.alpha = value.get<double>();
        else if (key == "K" || key == "k") q.max_length = value.get<int>();
        else if (key == "sigma") q.sigma = parse_scoring(value.get<std::string>());
        else throw InvalidInput("unknown parameter '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed query: ") + e.what());
  }
  return q;
}

}  // namespace cyclerank
