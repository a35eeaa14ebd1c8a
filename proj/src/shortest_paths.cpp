#include "topokernel/shortest_paths.hpp"

#include <algorithm>
#include <string>

#include "topokernel/error.hpp"

namespace topokernel {

DistanceRow bfs_distances(const Graph& g, NodeId source) {
  const std::size_t n = g.node_count();
  if (source >= n) {
    throw ArgumentError("bfs source " + std::to_string(source) + " out of range for " +
                        std::to_string(n) + " nodes");
  }
  DistanceRow row{source, std::vector<std::uint32_t>(n, kUnreachable)};
  std::vector<NodeId> queue;
  queue.reserve(n);
  queue.push_back(source);
  row.dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const std::uint32_t next = row.dist[u] + 1;
    for (NodeId v : g.neighbors(u)) {
      if (row.dist[v] == kUnreachable) {
        row.dist[v] = next;
        queue.push_back(v);
      }
    }
  }
  return row;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<bool> visited(n, false);
  std::vector<std::vector<NodeId>> components;
  std::vector<NodeId> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    auto& comp = components.emplace_back();
    visited[start] = true;
    stack.push_back(static_cast<NodeId>(start));
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (NodeId v : g.neighbors(u)) {
        if (!visited[v]) {
          visited[v] = true;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return components;
}

}  // namespace topokernel
