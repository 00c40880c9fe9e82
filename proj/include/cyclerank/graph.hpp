#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclerank/error.hpp"

namespace cyclerank {

using NodeId = std::uint32_t;

// Labeled edges as read from a file, before index assignment.
struct EdgeList {
  std::vector<std::pair<std::string, std::string>> edges;
  // Set by formats with a vertex-count header (Pajek, ASD).
  std::optional<std::size_t> declared_node_count;
  // Labels of declared vertices 0..N-1, in id order. Either empty or of
  // size *declared_node_count.
  std::vector<std::string> declared_labels;
};

/**
 * Immutable directed graph stored twice in compressed sparse row form:
 * once by source (out-edges) and once by target (in-edges). Every
 * adjacency list is sorted and free of duplicates. Nodes carry distinct
 * string labels.
 */
class Graph {
public:
  Graph() : out_offsets_{0}, in_offsets_{0} {}

  /// Builds from an index-level edge set. Duplicate edges are collapsed;
  /// labels must be distinct and cover every endpoint.
  Graph(std::vector<std::string> labels,
        std::vector<std::pair<NodeId, NodeId>> edges)
      : labels_(std::move(labels)) {
    const std::size_t n = labels_.size();
    label_index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!label_index_.emplace(labels_[i], static_cast<NodeId>(i)).second)
        throw InvalidInput("duplicate node label '" + labels_[i] + "'");
    }
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n)
        throw InvalidInput("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
      ++out_offsets_[u + 1];
      ++in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      out_offsets_[i + 1] += out_offsets_[i];
      in_offsets_[i + 1] += in_offsets_[i];
    }
    // edges are sorted by (u, v), so targets come out sorted per source.
    out_targets_.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) out_targets_[e] = edges[e].second;

    // Filling by ascending source keeps each in-list sorted as well.
    in_sources_.resize(edges.size());
    std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const auto& [u, v] : edges) in_sources_[cursor[v]++] = u;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return out_targets_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {out_targets_.data() + out_offsets_[u],
            out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const {
    auto adj = out_neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(NodeId u) const { return labels_[u]; }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

  /// All edges as (source, target), sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : out_neighbors(u)) out.emplace_back(u, v);
    return out;
  }

  /// Edge set keyed by labels, sorted. Two graphs with equal labeled edge
  /// sets describe the same relation regardless of index assignment.
  std::vector<std::pair<std::string, std::string>> labeled_edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : out_neighbors(u)) out.emplace_back(labels_[u], labels_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.out_offsets_ == b.out_offsets_ &&
           a.out_targets_ == b.out_targets_;
  }

private:
  friend Graph transpose(const Graph& g);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
};

/// Assigns indices and collapses parallel edges. Declared vertices (from a
/// Pajek or ASD header) keep their numeric order; remaining labels are
/// numbered in order of first occurrence.
inline Graph build_graph(const EdgeList& list) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  if (list.declared_node_count) {
    if (!list.declared_labels.empty() &&
        list.declared_labels.size() != *list.declared_node_count)
      throw InvalidInput("declared label count does not match declared node count");
    for (std::size_t i = 0; i < *list.declared_node_count; ++i) {
      const std::string label =
          list.declared_labels.empty() ? std::to_string(i) : list.declared_labels[i];
      if (index.contains(label))
        throw InvalidInput("duplicate vertex label '" + label + "'");
      intern(label);
    }
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(list.edges.size());
  for (const auto& [s, t] : list.edges) {
    const NodeId u = intern(s);
    const NodeId v = intern(t);
    edges.emplace_back(u, v);
  }
  return Graph(std::move(labels), std::move(edges));
}

inline Graph transpose(const Graph& g) {
  Graph t;
  t.labels_ = g.labels_;
  t.label_index_ = g.label_index_;
  t.out_offsets_ = g.in_offsets_;
  t.out_targets_ = g.in_sources_;
  t.in_offsets_ = g.out_offsets_;
  t.in_sources_ = g.out_targets_;
  return t;
}

inline NodeId resolve_node(const Graph& g, const std::string& label) {
  if (auto id = g.find(label)) return *id;
  throw NotFoundError(label, "unknown node label '" + label + "'");
}

}  // namespace cyclerank
