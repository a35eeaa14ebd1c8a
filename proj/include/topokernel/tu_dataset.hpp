#pragma once

#include <filesystem>
#include <string>

#include "topokernel/graph.hpp"

namespace topokernel {

// Loads a TU Dortmund benchmark dataset from `directory`:
//
//   <name>_A.txt               1-based "u, v" node pairs, one per line
//   <name>_graph_indicator.txt 1-based graph id of each node
//   <name>_graph_labels.txt    one integer class per graph
//   <name>_node_labels.txt     optional, one integer per node
//
// Edges are symmetrized and deduplicated. The smaller of the two class values
// becomes -1 and the larger +1.
//
// Throws IngestionError for a missing mandatory file, FormatError (with line
// number) for malformed content, UnsupportedDatasetError for more than two
// classes.
Dataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name);

}  // namespace topokernel
