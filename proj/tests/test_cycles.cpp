#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cyclerank/cycles.hpp"
#include "cyclerank/io.hpp"
#include "oracles.hpp"

using namespace cyclerank;

namespace {

Graph from_csv(const char* text) { return build_graph(parse_edgelist(text)); }

// a->b, b->a, a->c, c->a, b->c
const char* kFiveEdges = "a,b\nb,a\na,c\nc,a\nb,c\n";

void expect_matches_oracle(const Graph& g, NodeId r, int k, const CycleCounts& counts) {
  const auto expected = oracle::cycle_counts(g, r, k);
  for (int len = 2; len <= k; ++len)
    ASSERT_EQ(counts.row_for(len), expected.at(len)) << "length " << len << ", r=" << r;
}

}  // namespace

TEST(ReverseDistances, Triangle) {
  auto g = from_csv("a,b\nb,c\nc,a\n");
  EXPECT_EQ(reverse_distances(g, 0, 3), (std::vector<int>{0, 2, 1}));
}

TEST(ReverseDistances, NoPathBackIsUnreachable) {
  auto g = from_csv("a,b\n");
  auto d = reverse_distances(g, 0, 5);
  EXPECT_EQ(d[0], 0);
  EXPECT_EQ(d[1], kUnreachable);
}

TEST(ReverseDistances, CappedAtDepth) {
  auto g = from_csv("a,b\nb,c\nc,d\nd,a\n");
  auto d = reverse_distances(g, 0, 2);
  EXPECT_EQ(d, (std::vector<int>{0, kUnreachable, 2, 1}));
}

TEST(EnumerateCycles, SingleTriangle) {
  auto g = from_csv("a,b\nb,c\nc,a\n");
  auto c = enumerate_cycles(g, {0, 3});
  for (NodeId i = 0; i < 3; ++i) {
    EXPECT_EQ(c.count(3, i), 1u);
    EXPECT_EQ(c.count(2, i), 0u);
  }
}

// Hand enumeration: 2-cycles a-b, a-c; 3-cycle a->b->c->a (c->b is absent).
TEST(EnumerateCycles, FiveEdgeGraph) {
  auto g = from_csv(kFiveEdges);
  auto c = enumerate_cycles(g, {0, 3});
  EXPECT_EQ(c.row_for(2), (std::vector<std::uint64_t>{2, 1, 1}));
  EXPECT_EQ(c.row_for(3), (std::vector<std::uint64_t>{1, 1, 1}));
  expect_matches_oracle(g, 0, 3, c);
}

TEST(EnumerateCycles, AcyclicGraphHasNoCycles) {
  auto g = from_csv("a,b\na,c\nb,c\nc,d\n");
  for (NodeId r = 0; r < g.node_count(); ++r) {
    auto c = enumerate_cycles(g, {r, 6});
    for (int len = 2; len <= 6; ++len)
      for (NodeId i = 0; i < g.node_count(); ++i) EXPECT_EQ(c.count(len, i), 0u);
  }
}

TEST(EnumerateCycles, SelfLoopsNeverCount) {
  auto g = from_csv("a,a\na,b\nb,b\nb,a\n");
  auto c = enumerate_cycles(g, {0, 4});
  EXPECT_EQ(c.row_for(2), (std::vector<std::uint64_t>{1, 1}));
  EXPECT_EQ(c.row_for(3), (std::vector<std::uint64_t>{0, 0}));
}

TEST(EnumerateCycles, RejectsBadParameters) {
  auto g = from_csv("a,b\n");
  EXPECT_THROW(enumerate_cycles(g, {0, 1}), InvalidInput);
  EXPECT_THROW(enumerate_cycles(g, {9, 3}), InvalidInput);
}

TEST(EnumerateCycles, Cancellation) {
  auto g = from_csv(kFiveEdges);
  std::stop_source src;
  src.request_stop();
  EXPECT_THROW(enumerate_cycles(g, {0, 3}, {}, src.get_token()), Cancelled);
}

TEST(CycleRankScores, Triangle) {
  auto g = from_csv("a,b\nb,c\nc,a\n");
  auto s = cyclerank::cyclerank(g, {0, 3});
  for (double v : s.scores) EXPECT_NEAR(v, std::exp(-3.0), 1e-15);
  EXPECT_NEAR(s.scores[0], 0.049787, 1e-6);
  EXPECT_EQ(s.algorithm, "cyclerank");
  EXPECT_EQ(s.params.max_length, 3);
}

TEST(CycleRankScores, TwoCycle) {
  auto g = from_csv("a,b\nb,a\n");
  auto s = cyclerank::cyclerank(g, {0, 2});
  EXPECT_NEAR(s.scores[0], 0.135335, 1e-6);
  EXPECT_NEAR(s.scores[1], 0.135335, 1e-6);
}

TEST(CycleRankScores, FiveEdgeGraph) {
  auto g = from_csv(kFiveEdges);
  auto s = cyclerank::cyclerank(g, {0, 3});
  EXPECT_NEAR(s.scores[0], 2 * std::exp(-2.0) + std::exp(-3.0), 1e-15);
  EXPECT_NEAR(s.scores[0], 0.320458, 1e-6);
  EXPECT_NEAR(s.scores[1], 0.185122, 1e-6);
  EXPECT_NEAR(s.scores[2], 0.185122, 1e-6);
}

TEST(ScoreFromCounts, ScoringFunctions) {
  auto g = from_csv("a,b\nb,c\nc,a\n");
  auto c = enumerate_cycles(g, {0, 3});
  EXPECT_DOUBLE_EQ(score_from_counts(c, {Scoring::constant})[0], 1.0);
  EXPECT_DOUBLE_EQ(score_from_counts(c, {Scoring::reciprocal})[0], 1.0 / 3.0);
  CycleCounts zero(4, 3);
  for (double v : score_from_counts(zero, {Scoring::exponential})) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(parse_scoring("exp"), Scoring::exponential);
  EXPECT_THROW(parse_scoring("gaussian"), InvalidInput);
}

TEST(CycleProperties, OracleEquivalenceOnSmallGraphs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> density(0.15, 0.7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto g = oracle::random_graph(rng, n, density(rng));
    const auto r = static_cast<NodeId>(rng() % n);
    for (int k = 2; k <= 6; ++k) {
      auto pruned = enumerate_cycles(g, {r, k});
      expect_matches_oracle(g, r, k, pruned);
      EXPECT_EQ(enumerate_cycles(g, {r, k}, {.prune = false}), pruned);
      EXPECT_EQ(enumerate_cycles(g, {r, k}, {.prune = true, .threads = 3}), pruned);
    }
  }
}

TEST(CycleProperties, ReferenceHoldsTheMaximum) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 9;
    auto g = oracle::random_graph(rng, n, 0.35);
    const auto r = static_cast<NodeId>(rng() % n);
    const int k = 2 + trial % 4;
    for (auto sigma : {Scoring::exponential, Scoring::reciprocal, Scoring::constant}) {
      auto s = cyclerank::cyclerank(g, {r, k, sigma});
      EXPECT_EQ(s.scores[r], *std::max_element(s.scores.begin(), s.scores.end()));
    }
  }
}

TEST(CycleProperties, MonotoneInK) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_graph(rng, 7, 0.3);
    const auto r = static_cast<NodeId>(trial % 7);
    auto prev = cyclerank::cyclerank(g, {r, 2}).scores;
    for (int k = 3; k <= 7; ++k) {
      auto next = cyclerank::cyclerank(g, {r, k}).scores;
      for (std::size_t i = 0; i < next.size(); ++i) EXPECT_GE(next[i], prev[i]);
      prev = std::move(next);
    }
  }
}

TEST(CycleProperties, RelabelingPermutesScores) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 6;
    auto g = oracle::random_graph(rng, n, 0.35);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::string> labels(n);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) labels[perm[i]] = g.label(i);
    for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    Graph h(labels, edges);

    const NodeId r = static_cast<NodeId>(trial % n);
    auto a = cyclerank::cyclerank(g, {r, 5}).scores;
    auto b = cyclerank::cyclerank(h, {perm[r], 5}).scores;
    for (NodeId i = 0; i < n; ++i) EXPECT_EQ(a[i], b[perm[i]]);
  }
}

TEST(CycleProperties, SelfLoopsContributeNothing) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto with = oracle::random_graph(rng, 6, 0.4, true);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto [u, v] : with.edges())
      if (u != v) edges.emplace_back(u, v);
    Graph without(with.labels(), edges);
    const auto r = static_cast<NodeId>(trial % 6);
    EXPECT_EQ(enumerate_cycles(with, {r, 6}), enumerate_cycles(without, {r, 6}));
  }
}
