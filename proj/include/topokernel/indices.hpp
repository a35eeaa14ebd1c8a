#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topokernel/graph.hpp"
#include "topokernel/matrix.hpp"

namespace topokernel {

enum class Index { Wiener, Estrada, Randic };

// Canonical fingerprint ordering; weight vectors are aligned to it.
inline constexpr std::array<Index, 3> kCanonicalSchema = {Index::Wiener, Index::Estrada,
                                                          Index::Randic};

// Upper-case name: "WIENER", "ESTRADA", "RANDIC".
std::string_view index_name(Index index);
// Case-insensitive inverse of index_name. Throws ArgumentError.
Index parse_index(std::string_view name);
// Comma-separated list of index names. Throws ArgumentError on unknown or
// repeated names or an empty list.
std::vector<Index> parse_schema(std::string_view list);

// Sum of shortest-path distances over unordered node pairs that lie in the
// same connected component. Computed by BFS from every node.
double wiener_index(const Graph& g);

// Adjacency spectrum, ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
};
Spectrum symmetric_eigenvalues(const Graph& g);

// sum_j exp(lambda_j) = tr(exp(A)). Throws OverflowError if an eigenvalue
// exceeds 700.
double estrada_index(const Graph& g);

// sum over edges uv of 1 / sqrt(deg(u) deg(v)).
double randic_index(const Graph& g);

double compute_index(const Graph& g, Index index);

struct FeatureVector {
  std::vector<double> values;
  std::vector<Index> schema;
};

// values[i] is schema[i] evaluated on g. Throws ArgumentError for an empty
// schema or repeated names.
FeatureVector fingerprint(const Graph& g, std::span<const Index> schema);

// Row i holds the fingerprint of graphs[i]. Rows are independent, so the
// result does not depend on `jobs` (0 = hardware concurrency).
struct FeatureMatrix {
  Matrix values;
  std::vector<Index> schema;
};
FeatureMatrix batch_fingerprints(std::span<const Graph> graphs, std::span<const Index> schema,
                                 unsigned jobs = 1);

}  // namespace topokernel
