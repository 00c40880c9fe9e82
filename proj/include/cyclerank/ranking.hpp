#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cyclerank/graph.hpp"

namespace cyclerank {

/// Per-node scores from one algorithm run, together with the parameters
/// that produced them.
template <typename Echo>
struct ScoreVector {
  std::vector<double> scores;
  std::string algorithm;
  Echo params;
};

/// Nodes best first. `scores`, when present, runs parallel to `order`.
struct Ranking {
  std::vector<NodeId> order;
  std::optional<std::vector<double>> scores;
};

struct RankedEntry {
  std::string label;
  std::size_t rank = 0;  // 1-based
  std::optional<double> score;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

namespace detail {
struct ByScore {
  const std::vector<double>* scores;
  bool operator()(NodeId a, NodeId b) const {
    const double sa = (*scores)[a], sb = (*scores)[b];
    if (sa != sb) return sa > sb;
    return a < b;
  }
};
}  // namespace detail

/// Node indices by descending score, ties by ascending index.
inline std::vector<NodeId> rank_order(const std::vector<double>& scores) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), detail::ByScore{&scores});
  return order;
}

/// 1-based rank of every node under rank_order.
inline std::vector<std::size_t> rank_positions(const std::vector<double>& scores) {
  auto order = rank_order(scores);
  std::vector<std::size_t> pos(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i + 1;
  return pos;
}

template <typename Echo>
Ranking to_ranking(const ScoreVector<Echo>& s) {
  Ranking r;
  r.order = rank_order(s.scores);
  std::vector<double> sorted(r.order.size());
  for (std::size_t i = 0; i < r.order.size(); ++i) sorted[i] = s.scores[r.order[i]];
  r.scores = std::move(sorted);
  return r;
}

inline std::vector<RankedEntry> top_k(const Graph& g, const Ranking& r, std::size_t k) {
  std::vector<RankedEntry> out;
  const std::size_t m = std::min(k, r.order.size());
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    RankedEntry e{g.label(r.order[i]), i + 1, std::nullopt};
    if (r.scores) e.score = (*r.scores)[i];
    out.push_back(std::move(e));
  }
  return out;
}

/// Top k of a score vector without sorting the whole vector.
inline std::vector<RankedEntry> top_k(const Graph& g, const std::vector<double>& scores,
                                      std::size_t k) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  const std::size_t m = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                    detail::ByScore{&scores});
  std::vector<RankedEntry> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back({g.label(order[i]), i + 1, scores[order[i]]});
  return out;
}

template <typename Echo>
std::vector<RankedEntry> top_k(const Graph& g, const ScoreVector<Echo>& s, std::size_t k) {
  return top_k(g, s.scores, k);
}

}  // namespace cyclerank
