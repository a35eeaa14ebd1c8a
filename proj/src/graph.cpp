#include "topokernel/graph.hpp"

#include <algorithm>

#include "topokernel/error.hpp"

namespace topokernel {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges,
                        std::optional<std::vector<int>> node_labels) {
  if (node_labels && node_labels->size() != node_count) {
    throw ArgumentError("node label count " + std::to_string(node_labels->size()) +
                        " does not match node count " + std::to_string(node_count));
  }
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") out of range for " + std::to_string(node_count) + " nodes");
    }
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  for (const auto& e : directed) ++g.offsets_[e.first + 1];
  for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.neighbors_.reserve(directed.size());
  for (const auto& e : directed) g.neighbors_.push_back(e.second);
  g.node_labels_ = std::move(node_labels);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= node_count() || v >= node_count()) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  return out;
}

Graph permute_nodes(const Graph& g, std::span<const NodeId> permutation) {
  const std::size_t n = g.node_count();
  if (permutation.size() != n) throw ArgumentError("permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (NodeId p : permutation) {
    if (p >= n || seen[p]) throw ArgumentError("not a permutation");
    seen[p] = true;
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(permutation[u], permutation[v]);
  std::optional<std::vector<int>> labels;
  if (g.has_node_labels()) {
    labels.emplace(n);
    const auto src = g.node_labels();
    for (std::size_t v = 0; v < n; ++v) (*labels)[permutation[v]] = src[v];
  }
  return Graph::from_edges(n, edges, std::move(labels));
}

void Dataset::validate() const {
  if (graphs.empty()) throw ArgumentError("dataset '" + name + "' has no graphs");
  if (graphs.size() != class_labels.size()) {
    throw ArgumentError("dataset '" + name + "': " + std::to_string(graphs.size()) +
                        " graphs but " + std::to_string(class_labels.size()) + " labels");
  }
  for (int y : class_labels) {
    if (y != -1 && y != 1) throw ArgumentError("class labels must be -1 or +1");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> ids) const {
  Dataset out;
  out.name = name;
  out.graphs.reserve(ids.size());
  out.class_labels.reserve(ids.size());
  for (std::size_t i : ids) {
    if (i >= graphs.size()) throw ArgumentError("subset index out of range");
    out.graphs.push_back(graphs[i]);
    out.class_labels.push_back(class_labels[i]);
  }
  return out;
}

}  // namespace topokernel
