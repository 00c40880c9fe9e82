#pragma once

// CycleRank: relevance of every node to a reference node r, measured by the
// simple directed cycles of length 2..K that pass through both of them,
// each weighted by a scoring function of its length.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <future>
#include <limits>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/ranking.hpp"

namespace cyclerank {

enum class Scoring { exponential, reciprocal, constant };

inline std::string_view scoring_name(Scoring s) {
  switch (s) {
    case Scoring::exponential: return "exponential";
    case Scoring::reciprocal: return "reciprocal";
    case Scoring::constant: return "constant";
  }
  return "?";
}

inline Scoring parse_scoring(std::string_view name) {
  if (name == "exponential" || name == "exp") return Scoring::exponential;
  if (name == "reciprocal" || name == "inverse") return Scoring::reciprocal;
  if (name == "constant" || name == "const") return Scoring::constant;
  throw InvalidInput("unknown scoring function '" + std::string(name) +
                     "'; expected exponential, reciprocal or constant");
}

/// Weight of one cycle of the given length. Always positive.
struct ScoringFunction {
  Scoring kind = Scoring::exponential;

  double weight(int length) const {
    switch (kind) {
      case Scoring::exponential: return std::exp(-static_cast<double>(length));
      case Scoring::reciprocal: return 1.0 / static_cast<double>(length);
      case Scoring::constant: return 1.0;
    }
    return 0.0;
  }
};

struct CycleRankParams {
  static constexpr int kDefaultMaxLength = 3;
  // Enumeration is exponential in K; requests above this are refused at
  // the service and CLI boundary.
  static constexpr int kMaxSafeLength = 10;

  NodeId reference = 0;
  int max_length = kDefaultMaxLength;
  Scoring scoring = Scoring::exponential;

  void validate(const Graph& g) const {
    if (max_length < 2)
      throw InvalidInput("max cycle length K must be at least 2, got " + std::to_string(max_length));
    if (reference >= g.node_count())
      throw InvalidInput("reference node " + std::to_string(reference) + " out of range");
  }
};

using CycleScores = ScoreVector<CycleRankParams>;

/// count(n, i): simple cycles of length n through the reference node that
/// also contain node i.
class CycleCounts {
public:
  CycleCounts() = default;
  CycleCounts(int max_length, std::size_t node_count)
      : max_length_(max_length),
        rows_(static_cast<std::size_t>(std::max(0, max_length - 1)),
              std::vector<std::uint64_t>(node_count, 0)) {}

  int max_length() const noexcept { return max_length_; }
  std::size_t node_count() const noexcept { return rows_.empty() ? 0 : rows_.front().size(); }

  std::uint64_t count(int length, NodeId i) const { return rows_[row(length)][i]; }
  std::uint64_t& count(int length, NodeId i) { return rows_[row(length)][i]; }
  const std::vector<std::uint64_t>& row_for(int length) const { return rows_[row(length)]; }

  CycleCounts& operator+=(const CycleCounts& other) {
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (std::size_t i = 0; i < rows_[k].size(); ++i) rows_[k][i] += other.rows_[k][i];
    return *this;
  }

  friend bool operator==(const CycleCounts&, const CycleCounts&) = default;

private:
  std::size_t row(int length) const {
    if (length < 2 || length > max_length_)
      throw std::out_of_range("cycle length " + std::to_string(length) + " outside [2, K]");
    return static_cast<std::size_t>(length - 2);
  }

  int max_length_ = 0;
  std::vector<std::vector<std::uint64_t>> rows_;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Shortest path length from every node to r, by BFS over in-edges.
/// Distances above max_depth are reported as kUnreachable.
inline std::vector<int> reverse_distances(const Graph& g, NodeId r, int max_depth) {
  std::vector<int> dist(g.node_count(), kUnreachable);
  dist[r] = 0;
  std::deque<NodeId> frontier{r};
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    if (dist[v] >= max_depth) continue;
    for (NodeId u : g.in_neighbors(v)) {
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        frontier.push_back(u);
      }
    }
  }
  return dist;
}

struct EnumerateOptions {
  // Skip successors that cannot get back to r within the remaining budget.
  bool prune = true;
  // First-hop successors of r are split across this many workers. The
  // counts do not depend on it.
  unsigned threads = 1;
};

namespace detail {

class CycleSearch {
public:
  CycleSearch(const Graph& g, NodeId r, int max_length, const std::vector<int>* dist)
      : g_(g), r_(r), k_(max_length), dist_(dist), on_path_(g.node_count(), 0),
        counts_(max_length, g.node_count()) {
    path_.reserve(static_cast<std::size_t>(max_length));
  }

  // Explores every cycle whose second node is `first`.
  void branch(NodeId first) {
    path_.assign(1, r_);
    on_path_[r_] = 1;
    if (admissible(first)) descend(first);
    on_path_[r_] = 0;
  }

  CycleCounts take() && { return std::move(counts_); }

private:
  // path_ holds the nodes before v; reaching v uses path_.size() edges.
  bool admissible(NodeId v) const {
    const auto used = static_cast<int>(path_.size());
    if (dist_) return (*dist_)[v] != kUnreachable && used + (*dist_)[v] <= k_;
    return used + 1 <= k_;
  }

  void descend(NodeId u) {
    path_.push_back(u);
    on_path_[u] = 1;
    for (NodeId v : g_.out_neighbors(u)) {
      if (v == r_) {
        record();
      } else if (!on_path_[v] && admissible(v)) {
        descend(v);
      }
    }
    on_path_[u] = 0;
    path_.pop_back();
  }

  void record() {
    const int length = static_cast<int>(path_.size());
    for (NodeId w : path_) ++counts_.count(length, w);
  }

  const Graph& g_;
  NodeId r_;
  int k_;
  const std::vector<int>* dist_;
  std::vector<char> on_path_;
  std::vector<NodeId> path_;
  CycleCounts counts_;
};

}  // namespace detail

/// Exact counts of simple cycles of length 2..K through p.reference, by
/// depth-bounded search from r over out-edges. Self-loops never count.
inline CycleCounts enumerate_cycles(const Graph& g, const CycleRankParams& p,
                                    EnumerateOptions opts = {}, std::stop_token stop = {}) {
  p.validate(g);
  const NodeId r = p.reference;
  std::vector<int> dist;
  if (opts.prune) dist = reverse_distances(g, r, p.max_length);
  const std::vector<int>* dist_ptr = opts.prune ? &dist : nullptr;

  std::vector<NodeId> firsts;
  for (NodeId v : g.out_neighbors(r))
    if (v != r) firsts.push_back(v);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(firsts.size())));
  auto run = [&](unsigned worker) {
    detail::CycleSearch search(g, r, p.max_length, dist_ptr);
    for (std::size_t i = worker; i < firsts.size(); i += workers) {
      if (stop.stop_requested()) throw Cancelled();
      search.branch(firsts[i]);
    }
    return std::move(search).take();
  };

  if (workers == 1) return run(0);

  std::vector<std::future<CycleCounts>> parts;
  for (unsigned w = 1; w < workers; ++w) parts.push_back(std::async(std::launch::async, run, w));
  CycleCounts total = run(0);
  for (auto& part : parts) total += part.get();
  return total;
}

/// score(i) = sum over n = 2..K of weight(n) * count(n, i). Not normalized.
inline std::vector<double> score_from_counts(const CycleCounts& c, ScoringFunction s) {
  std::vector<double> scores(c.node_count(), 0.0);
  for (int n = 2; n <= c.max_length(); ++n) {
    const double w = s.weight(n);
    const auto& row = c.row_for(n);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) scores[i] += w * static_cast<double>(row[i]);
  }
  return scores;
}

inline CycleScores cyclerank(const Graph& g, const CycleRankParams& p, EnumerateOptions opts = {},
                             std::stop_token stop = {}) {
  const auto counts = enumerate_cycles(g, p, opts, stop);
  return {score_from_counts(counts, ScoringFunction{p.scoring}), "cyclerank", p};
}

}  // namespace cyclerank
