#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "topokernel/graph.hpp"

namespace topokernel {

// Marks nodes outside the source's connected component.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

struct DistanceRow {
  NodeId source = 0;
  std::vector<std::uint32_t> dist;  // hop counts or kUnreachable
};

// Unweighted single-source shortest paths. Throws ArgumentError when
// source >= g.node_count().
DistanceRow bfs_distances(const Graph& g, NodeId source);

// Connected components; each component lists its nodes in ascending order and
// components are ordered by their smallest node.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

}  // namespace topokernel
