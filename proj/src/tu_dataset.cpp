#include "topokernel/tu_dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>

#include "topokernel/error.hpp"

namespace topokernel {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_int(std::string_view token, const std::string& file, std::size_t line) {
  token = trim(token);
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw FormatError(file, line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

struct Line {
  std::size_t number;
  std::string text;
};

// Non-blank lines with their 1-based line numbers.
std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open dataset file " + path.string());
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!trim(text).empty()) lines.push_back({number, std::move(text)});
  }
  return lines;
}

std::vector<long long> read_int_column(const std::filesystem::path& path, std::vector<std::size_t>* line_numbers = nullptr) {
  const std::string file = path.filename().string();
  std::vector<long long> values;
  for (const auto& line : read_lines(path)) {
    values.push_back(parse_int(line.text, file, line.number));
    if (line_numbers) line_numbers->push_back(line.number);
  }
  return values;
}

}  // namespace

Dataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name) {
  const auto edges_path = directory / (name + "_A.txt");
  const auto indicator_path = directory / (name + "_graph_indicator.txt");
  const auto graph_labels_path = directory / (name + "_graph_labels.txt");
  const auto node_labels_path = directory / (name + "_node_labels.txt");
  for (const auto& p : {edges_path, indicator_path, graph_labels_path}) {
    if (!std::filesystem::is_regular_file(p)) {
      throw IngestionError("missing dataset file " + p.filename().string() + " in " +
                           directory.string());
    }
  }

  std::vector<std::size_t> indicator_lines;
  const auto indicator = read_int_column(indicator_path, &indicator_lines);
  const std::string indicator_file = indicator_path.filename().string();
  long long graph_count = 0;
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    if (indicator[i] < 1) {
      throw FormatError(indicator_file, indicator_lines[i], "graph id must be >= 1");
    }
    graph_count = std::max(graph_count, indicator[i]);
  }

  std::vector<std::size_t> label_lines;
  const auto raw_labels = read_int_column(graph_labels_path, &label_lines);
  if (raw_labels.size() != static_cast<std::size_t>(graph_count)) {
    throw FormatError(graph_labels_path.filename().string(),
                      label_lines.empty() ? 1 : label_lines.back(),
                      std::to_string(raw_labels.size()) + " graph labels for " +
                          std::to_string(graph_count) + " graphs");
  }
  const std::set<long long> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw UnsupportedDatasetError("dataset '" + name + "' has " + std::to_string(distinct.size()) +
                                  " classes; only binary classification is supported");
  }

  std::optional<std::vector<long long>> node_labels;
  if (std::filesystem::is_regular_file(node_labels_path)) {
    std::vector<std::size_t> lines;
    node_labels = read_int_column(node_labels_path, &lines);
    if (node_labels->size() != indicator.size()) {
      throw FormatError(node_labels_path.filename().string(), lines.empty() ? 1 : lines.back(),
                        std::to_string(node_labels->size()) + " node labels for " +
                            std::to_string(indicator.size()) + " nodes");
    }
  }

  // Global node -> (graph, local index).
  const auto graphs_n = static_cast<std::size_t>(graph_count);
  std::vector<std::size_t> local_index(indicator.size());
  std::vector<std::size_t> node_counts(graphs_n, 0);
  for (std::size_t v = 0; v < indicator.size(); ++v) {
    const auto gid = static_cast<std::size_t>(indicator[v] - 1);
    local_index[v] = node_counts[gid]++;
  }

  std::vector<std::vector<Edge>> edges(graphs_n);
  const std::string edges_file = edges_path.filename().string();
  for (const auto& line : read_lines(edges_path)) {
    const std::string_view text = line.text;
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw FormatError(edges_file, line.number, "expected 'u, v'");
    }
    const long long u = parse_int(text.substr(0, comma), edges_file, line.number);
    const long long v = parse_int(text.substr(comma + 1), edges_file, line.number);
    const auto node_total = static_cast<long long>(indicator.size());
    if (u < 1 || u > node_total || v < 1 || v > node_total) {
      throw FormatError(edges_file, line.number,
                        "node index out of range [1, " + std::to_string(node_total) + "]");
    }
    const auto gu = indicator[u - 1];
    if (gu != indicator[v - 1]) {
      throw FormatError(edges_file, line.number, "edge joins nodes of different graphs");
    }
    edges[gu - 1].emplace_back(static_cast<NodeId>(local_index[u - 1]),
                               static_cast<NodeId>(local_index[v - 1]));
  }

  std::vector<std::vector<int>> labels_per_graph;
  if (node_labels) {
    labels_per_graph.resize(graphs_n);
    for (std::size_t g = 0; g < graphs_n; ++g) labels_per_graph[g].reserve(node_counts[g]);
    for (std::size_t v = 0; v < indicator.size(); ++v) {
      labels_per_graph[indicator[v] - 1].push_back(static_cast<int>((*node_labels)[v]));
    }
  }

  Dataset ds;
  ds.name = name;
  ds.graphs.reserve(graphs_n);
  const long long negative_value = *distinct.begin();
  for (std::size_t g = 0; g < graphs_n; ++g) {
    std::optional<std::vector<int>> labels;
    if (node_labels) labels = std::move(labels_per_graph[g]);
    ds.graphs.push_back(Graph::from_edges(node_counts[g], edges[g], std::move(labels)));
    ds.class_labels.push_back(raw_labels[g] == negative_value ? -1 : +1);
  }
  ds.validate();
  return ds;
}

}  // namespace topokernel
