#include "topokernel/indices.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>

#include "topokernel/error.hpp"
#include "topokernel/parallel.hpp"
#include "topokernel/shortest_paths.hpp"

namespace topokernel {

std::string_view index_name(Index index) {
  switch (index) {
    case Index::Wiener:
      return "WIENER";
    case Index::Estrada:
      return "ESTRADA";
    case Index::Randic:
      return "RANDIC";
  }
  return "UNKNOWN";
}

Index parse_index(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Index index : kCanonicalSchema) {
    if (upper == index_name(index)) return index;
  }
  throw ArgumentError("unknown topological index '" + std::string(name) + "'");
}

std::vector<Index> parse_schema(std::string_view list) {
  std::vector<Index> schema;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    auto token = list.substr(start, comma - start);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    const Index index = parse_index(token);
    if (std::find(schema.begin(), schema.end(), index) != schema.end()) {
      throw ArgumentError("index '" + std::string(token) + "' listed twice");
    }
    schema.push_back(index);
    start = comma + 1;
  }
  return schema;
}

double wiener_index(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue(n);
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    dist[s] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = static_cast<NodeId>(s);
    while (head < tail) {
      const NodeId u = queue[head++];
      const std::uint32_t next = dist[u] + 1;
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] == kUnreachable) {
          dist[v] = next;
          queue[tail++] = v;
          if (v > s) total += next;
        }
      }
    }
  }
  return static_cast<double>(total);
}

Spectrum symmetric_eigenvalues(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Spectrum spectrum;
  if (n == 0) return spectrum;
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(static_cast<std::size_t>(u))) adjacency(u, v) = 1.0;
  }
  // Householder tridiagonalization followed by implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  spectrum.eigenvalues.assign(values.data(), values.data() + values.size());
  std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  return spectrum;
}

double estrada_index(const Graph& g) {
  if (g.edge_count() == 0) return static_cast<double>(g.node_count());
  const Spectrum spectrum = symmetric_eigenvalues(g);
  double sum = 0.0;
  for (double lambda : spectrum.eigenvalues) {
    if (lambda > 700.0) throw OverflowError("adjacency eigenvalue above 700; exp() overflows");
    sum += std::exp(lambda);
  }
  return sum;
}

double randic_index(const Graph& g) {
  double sum = 0.0;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    const auto du = static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u)) {
      if (u < v) sum += 1.0 / std::sqrt(du * static_cast<double>(g.degree(v)));
    }
  }
  return sum;
}

double compute_index(const Graph& g, Index index) {
  switch (index) {
    case Index::Wiener:
      return wiener_index(g);
    case Index::Estrada:
      return estrada_index(g);
    case Index::Randic:
      return randic_index(g);
  }
  throw ArgumentError("unknown topological index");
}

namespace {

void check_schema(std::span<const Index> schema) {
  if (schema.empty()) throw ArgumentError("fingerprint schema is empty");
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (static_cast<int>(schema[i]) < 0 || static_cast<int>(schema[i]) > 2) {
      throw ArgumentError("unknown topological index in schema");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (schema[i] == schema[j]) {
        throw ArgumentError("index " + std::string(index_name(schema[i])) + " listed twice");
      }
    }
  }
}

}  // namespace

FeatureVector fingerprint(const Graph& g, std::span<const Index> schema) {
  check_schema(schema);
  FeatureVector fv;
  fv.schema.assign(schema.begin(), schema.end());
  fv.values.reserve(schema.size());
  for (Index index : schema) fv.values.push_back(compute_index(g, index));
  return fv;
}

FeatureMatrix batch_fingerprints(std::span<const Graph> graphs, std::span<const Index> schema,
                                 unsigned jobs) {
  check_schema(schema);
  FeatureMatrix out{Matrix(graphs.size(), schema.size()), {schema.begin(), schema.end()}};
  parallel_for(graphs.size(), jobs, [&](std::size_t i) {
    auto row = out.values.row(i);
    for (std::size_t c = 0; c < schema.size(); ++c) row[c] = compute_index(graphs[i], schema[c]);
  });
  return out;
}

}  // namespace topokernel
