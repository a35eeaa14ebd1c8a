#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "topokernel/error.hpp"
#include "topokernel/kernels.hpp"
#include "topokernel/parallel.hpp"

namespace topokernel {
namespace {

struct SignatureHash {
  std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t x : key) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace

std::vector<WlHistogram> wl_subtree_features(std::span<const Graph> graphs, int iterations) {
  if (iterations < 0) throw ArgumentError("WL iteration count must be non-negative");

  std::uint32_t next_id = 0;
  std::vector<std::vector<std::uint32_t>> labels(graphs.size());
  std::vector<std::vector<std::uint32_t>> seen(graphs.size());  // all ids per graph

  std::unordered_map<int, std::uint32_t> initial;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const Graph& graph = graphs[g];
    const auto node_labels = graph.node_labels();
    labels[g].resize(graph.node_count());
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
      const int raw = graph.has_node_labels() ? node_labels[v] : 0;
      auto [it, inserted] = initial.try_emplace(raw, next_id);
      if (inserted) ++next_id;
      labels[g][v] = it->second;
    }
    seen[g] = labels[g];
  }

  std::vector<std::uint32_t> signature;
  for (int t = 0; t < iterations; ++t) {
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, SignatureHash> dictionary;
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      const Graph& graph = graphs[g];
      std::vector<std::uint32_t> relabeled(graph.node_count());
      for (std::size_t v = 0; v < graph.node_count(); ++v) {
        signature.clear();
        for (NodeId u : graph.neighbors(v)) signature.push_back(labels[g][u]);
        std::sort(signature.begin(), signature.end());
        signature.insert(signature.begin(), labels[g][v]);
        auto [it, inserted] = dictionary.try_emplace(signature, next_id);
        if (inserted) ++next_id;
        relabeled[v] = it->second;
      }
      labels[g] = std::move(relabeled);
      seen[g].insert(seen[g].end(), labels[g].begin(), labels[g].end());
    }
  }

  std::vector<WlHistogram> histograms(graphs.size());
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    auto& ids = seen[g];
    std::sort(ids.begin(), ids.end());
    auto& counts = histograms[g].counts;
    for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j < ids.size() && ids[j] == ids[i]) ++j;
      counts.emplace_back(ids[i], static_cast<std::uint32_t>(j - i));
      i = j;
    }
  }
  return histograms;
}

double histogram_dot(const WlHistogram& a, const WlHistogram& b) {
  double sum = 0.0;
  auto ia = a.counts.begin(), ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += static_cast<double>(ia->second) * static_cast<double>(ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum;
}

GramMatrix wl_subtree_gram(std::span<const Graph> graphs, int iterations, WlOptions options,
                           unsigned jobs) {
  const auto features = wl_subtree_features(graphs, iterations);
  const std::size_t n = graphs.size();
  Matrix values(n, n);
  parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = histogram_dot(features[i], features[j]);
      values(i, j) = k;
      values(j, i) = k;
    }
  });
  if (options.normalized) {
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = std::sqrt(values(i, i));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double denom = norms[i] * norms[j];
        values(i, j) = denom > 0.0 ? values(i, j) / denom : 0.0;
      }
    }
  }
  GramMatrix gram{std::move(values), KernelMethod::WlSubtree, {}};
  gram.params.wl_iterations = iterations;
  gram.params.wl_normalized = options.normalized;
  return gram;
}

}  // namespace topokernel
