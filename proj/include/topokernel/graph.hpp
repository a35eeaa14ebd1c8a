#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace topokernel {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable undirected simple graph stored as compressed adjacency lists.
// Neighbor lists are sorted, symmetric and free of self-loops and repeats.
// Node labels are optional and only used by the WL subtree kernel.
class Graph {
 public:
  Graph() = default;

  // Builds a graph from an edge list. Either orientation of an edge may be
  // given; repeated edges and self-loops are discarded. Throws ArgumentError
  // when an endpoint is >= node_count or labels have the wrong length.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                          std::optional<std::vector<int>> node_labels = std::nullopt);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(std::size_t v) const noexcept {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const noexcept;

  bool has_node_labels() const noexcept { return node_labels_.has_value(); }
  std::span<const int> node_labels() const noexcept {
    return node_labels_ ? std::span<const int>(*node_labels_) : std::span<const int>();
  }

  // Edge list with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::optional<std::vector<int>> node_labels_;
};

// Graph with node v renamed to permutation[v]. Labels move with their nodes.
Graph permute_nodes(const Graph& g, std::span<const NodeId> permutation);

// Named collection of graphs with binary class labels in {-1, +1}.
struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> class_labels;

  std::size_t size() const noexcept { return graphs.size(); }

  // Throws ArgumentError unless sizes match, there is at least one graph and
  // every label is -1 or +1.
  void validate() const;

  // Dataset restricted to the given graph positions, in that order.
  Dataset subset(std::span<const std::size_t> ids) const;
};

}  // namespace topokernel
