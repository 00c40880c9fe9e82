#pragma once

// PageRank-family walks: PageRank, Personalized PageRank, CheiRank and
// 2DRank, each with a single-node personalized variant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"
#include "cyclerank/ranking.hpp"

namespace cyclerank {

struct WalkParams {
  static constexpr double kDefaultAlpha = 0.85;
  static constexpr double kDefaultTolerance = 1e-9;
  static constexpr int kDefaultMaxIterations = 200;

  double alpha = kDefaultAlpha;  // probability of following an edge
  double tolerance = kDefaultTolerance;  // L1 residual threshold
  int max_iterations = kDefaultMaxIterations;
  std::optional<NodeId> reference;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw InvalidInput("alpha must be in (0, 1), got " + std::to_string(alpha));
    if (!(tolerance >= 0.0)) throw InvalidInput("tolerance must be non-negative");
    if (max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
  }
};

/// Parameters of a walk plus how the iteration ended.
struct WalkEcho {
  WalkParams params;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

using WalkScores = ScoreVector<WalkEcho>;

namespace detail {

inline void check_graph(const Graph& g) {
  if (g.empty()) throw InvalidInput("graph has no nodes");
}

inline NodeId check_reference(const Graph& g, const WalkParams& p) {
  if (!p.reference) throw InvalidInput("personalized walk requires a reference node");
  if (*p.reference >= g.node_count())
    throw InvalidInput("reference node " + std::to_string(*p.reference) + " out of range");
  return *p.reference;
}

// Power iteration of the alpha-damped walk. Teleport and dangling mass both
// go to `target` when set, otherwise uniformly to every node. The iteration
// starts from the teleport distribution.
inline WalkScores power_iterate(const Graph& g, const WalkParams& p,
                                std::optional<NodeId> target, std::stop_token stop) {
  const std::size_t n = g.node_count();
  const double alpha = p.alpha;
  const double uniform = 1.0 / static_cast<double>(n);

  std::vector<double> inv_out(n, 0.0);
  std::vector<NodeId> dangling;
  for (NodeId u = 0; u < n; ++u) {
    if (const auto d = g.out_degree(u)) inv_out[u] = 1.0 / static_cast<double>(d);
    else dangling.push_back(u);
  }

  std::vector<double> x(n, target ? 0.0 : uniform);
  if (target) x[*target] = 1.0;
  std::vector<double> next(n);

  WalkEcho echo{p, 0, 0.0, false};
  for (int it = 1; it <= p.max_iterations; ++it) {
    if (stop.stop_requested()) throw Cancelled();

    double dangling_mass = 0.0;
    for (NodeId u : dangling) dangling_mass += x[u];
    const double redistributed = alpha * dangling_mass + (1.0 - alpha);

    double residual = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double inflow = 0.0;
      for (NodeId u : g.in_neighbors(v)) inflow += x[u] * inv_out[u];
      double value = alpha * inflow;
      if (!target) value += redistributed * uniform;
      else if (v == *target) value += redistributed;
      next[v] = value;
      residual += std::abs(value - x[v]);
    }
    x.swap(next);
    echo.iterations = it;
    echo.residual = residual;
    if (residual < p.tolerance) {
      echo.converged = true;
      break;
    }
  }

  double total = 0.0;
  for (double v : x) total += v;
  if (total > 0.0)
    for (double& v : x) v /= total;

  return {std::move(x), "", echo};
}

// Orders nodes by the larger of their two ranks, then the smaller, then
// index.
inline Ranking combine_two_d(const std::vector<double>& forward,
                             const std::vector<double>& backward) {
  const auto rp = rank_positions(forward);
  const auto rc = rank_positions(backward);
  std::vector<NodeId> order(rp.size());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const auto hi_a = std::max(rp[a], rc[a]), hi_b = std::max(rp[b], rc[b]);
    if (hi_a != hi_b) return hi_a < hi_b;
    const auto lo_a = std::min(rp[a], rc[a]), lo_b = std::min(rp[b], rc[b]);
    if (lo_a != lo_b) return lo_a < lo_b;
    return a < b;
  });
  return {std::move(order), std::nullopt};
}

}  // namespace detail

/// Stationary distribution of the damped walk with uniform teleport;
/// dangling mass is spread uniformly. p.reference is ignored.
inline WalkScores pagerank(const Graph& g, WalkParams p, std::stop_token stop = {}) {
  p.validate();
  detail::check_graph(g);
  p.reference.reset();
  auto s = detail::power_iterate(g, p, std::nullopt, stop);
  s.algorithm = "pagerank";
  return s;
}

/// Teleport and dangling mass both return to p.reference.
inline WalkScores personalized_pagerank(const Graph& g, const WalkParams& p,
                                        std::stop_token stop = {}) {
  p.validate();
  detail::check_graph(g);
  const NodeId r = detail::check_reference(g, p);
  auto s = detail::power_iterate(g, p, r, stop);
  s.algorithm = "personalized_pagerank";
  return s;
}

inline WalkScores cheirank(const Graph& g, const WalkParams& p, std::stop_token stop = {}) {
  auto s = pagerank(transpose(g), p, stop);
  s.algorithm = "cheirank";
  return s;
}

inline WalkScores personalized_cheirank(const Graph& g, const WalkParams& p,
                                        std::stop_token stop = {}) {
  auto s = personalized_pagerank(transpose(g), p, stop);
  s.algorithm = "personalized_cheirank";
  return s;
}

/// Rank-only combination of PageRank and CheiRank orderings; carries no
/// scores.
inline Ranking two_d_rank(const Graph& g, const WalkParams& p, std::stop_token stop = {}) {
  const auto pr = pagerank(g, p, stop);
  const auto cr = cheirank(g, p, stop);
  return detail::combine_two_d(pr.scores, cr.scores);
}

inline Ranking personalized_two_d_rank(const Graph& g, const WalkParams& p,
                                       std::stop_token stop = {}) {
  const auto pr = personalized_pagerank(g, p, stop);
  const auto cr = personalized_cheirank(g, p, stop);
  return detail::combine_two_d(pr.scores, cr.scores);
}

}  // namespace cyclerank
