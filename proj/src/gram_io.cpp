#include "topokernel/gram_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>

#include "topokernel/error.hpp"
#include "topokernel/text_format.hpp"

namespace topokernel {

std::string fingerprint_csv(const FeatureMatrix& features, std::span<const int> class_labels) {
  if (class_labels.size() != features.values.rows()) {
    throw ArgumentError("fingerprint_csv: label count does not match row count");
  }
  std::string out = "graph_id";
  for (Index index : features.schema) {
    std::string name(index_name(index));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out += "," + name;
  }
  out += ",label\n";
  for (std::size_t r = 0; r < features.values.rows(); ++r) {
    out += std::to_string(r + 1);
    for (double v : features.values.row(r)) out += "," + format_double(v);
    out += "," + std::to_string(class_labels[r]) + "\n";
  }
  return out;
}

std::string gram_csv(const Matrix& gram) {
  std::string out;
  out.reserve(gram.rows() * gram.cols() * 20);
  for (std::size_t r = 0; r < gram.rows(); ++r) {
    for (std::size_t c = 0; c < gram.cols(); ++c) {
      if (c) out += ',';
      out += format_double(gram(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string gram_metadata_json(const GramMatrix& gram, const std::string& dataset_name,
                               double build_seconds, const std::string& manifest_file) {
  nlohmann::ordered_json meta;
  meta["method"] = kernel_method_name(gram.method, gram.params.index);
  meta["dataset"] = dataset_name;
  meta["n"] = gram.size();
  if (gram.params.index) meta["index"] = std::string(index_name(*gram.params.index));
  if (!gram.params.gammas.empty()) meta["gamma"] = gram.params.gammas;
  if (gram.params.weights) {
    const auto& w = gram.params.weights->values();
    meta["weights"] = std::vector<double>(w.begin(), w.end());
  }
  if (gram.params.wl_iterations) {
    meta["h"] = *gram.params.wl_iterations;
    meta["normalized"] = gram.params.wl_normalized;
  }
  meta["build_seconds"] = build_seconds;
  if (!manifest_file.empty()) meta["manifest"] = manifest_file;
  return meta.dump(2) + "\n";
}

void write_gram(const std::filesystem::path& path, const GramMatrix& gram,
                const std::string& dataset_name, double build_seconds,
                const std::string& manifest_file) {
  write_text_file(path, gram_csv(gram.values));
  auto meta_path = path;
  meta_path += ".meta.json";
  write_text_file(meta_path, gram_metadata_json(gram, dataset_name, build_seconds, manifest_file));
}

Matrix read_gram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_fields(line, ',')) {
      try {
        row.push_back(parse_real(field));
      } catch (const ArgumentError& e) {
        throw FormatError(path.filename().string(), number, e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(path.filename().string(), number, "ragged row");
    }
    rows.push_back(std::move(row));
  }
  Matrix out(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

}  // namespace topokernel
