#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "topokernel/graph.hpp"
#include "topokernel/indices.hpp"
#include "topokernel/kernels.hpp"

namespace topokernel {

// Fingerprint CSV: header "graph_id,<index names in lower case>,label", one
// row per graph, 1-based graph ids, values rendered with 17 significant
// digits. The canonical schema gives "graph_id,wiener,estrada,randic,label".
std::string fingerprint_csv(const FeatureMatrix& features, std::span<const int> class_labels);

// Square, headerless CSV of the Gram values.
std::string gram_csv(const Matrix& gram);

// JSON sidecar describing how a Gram matrix was built.
std::string gram_metadata_json(const GramMatrix& gram, const std::string& dataset_name,
                               double build_seconds, const std::string& manifest_file = {});

// Writes <path> and <path>.meta.json.
void write_gram(const std::filesystem::path& path, const GramMatrix& gram,
                const std::string& dataset_name, double build_seconds,
                const std::string& manifest_file = {});

// Reads a square headerless CSV. Throws FormatError on ragged rows.
Matrix read_gram_csv(const std::filesystem::path& path);

}  // namespace topokernel
