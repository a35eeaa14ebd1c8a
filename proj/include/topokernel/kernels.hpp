#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topokernel/graph.hpp"
#include "topokernel/indices.hpp"
#include "topokernel/matrix.hpp"

namespace topokernel {

// exp(-gamma * ||x - y||^2). gamma must be >= 0; throws ArgumentError on a
// dimension mismatch or negative gamma.
double rbf(std::span<const double> x, std::span<const double> y, double gamma);

// Column-wise z-score parameters fitted on training rows.
struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population deviation; values below 1e-12 become 1

  Matrix apply(const Matrix& features) const;
};

StandardizationStats fit_standardizer(const Matrix& train_features);
// Fit on the given rows of `features` only.
StandardizationStats fit_standardizer(const Matrix& features, std::span<const std::size_t> rows);

// Convex weights aligned to [WIENER, ESTRADA, RANDIC].
class LctkWeights {
 public:
  // Throws ArgumentError unless every weight is >= 0 and they sum to 1
  // within 1e-12.
  explicit LctkWeights(std::array<double, 3> w);

  const std::array<double, 3>& values() const noexcept { return w_; }
  double operator[](std::size_t i) const noexcept { return w_[i]; }

  // The seven weight vectors of the default search grid.
  static std::vector<LctkWeights> search_defaults();

  friend bool operator==(const LctkWeights&, const LctkWeights&) = default;

 private:
  std::array<double, 3> w_;
};

enum class KernelMethod { Single, Efv, Lctk, WlSubtree };

std::string kernel_method_name(KernelMethod method, std::optional<Index> index = std::nullopt);

struct KernelParams {
  std::optional<Index> index;           // Single
  std::vector<double> gammas;           // one for Single/EFV, three for LCTK
  std::optional<LctkWeights> weights;   // LCTK
  std::optional<int> wl_iterations;     // WL
  bool wl_normalized = false;
};

struct GramMatrix {
  Matrix values;
  KernelMethod method = KernelMethod::Single;
  KernelParams params;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }
};

// Kernel between every row of `a` and every row of `b` (rows(a) x rows(b)).
Matrix rbf_block(const Matrix& a, const Matrix& b, double gamma, unsigned jobs = 1);
// Symmetric RBF Gram over the rows of `features`; the diagonal is exactly 1.
Matrix rbf_gram(const Matrix& features, double gamma, unsigned jobs = 1);

// Single-index topological kernel over an n x 1 (standardized) column.
GramMatrix gram_single(const Matrix& features, Index index, double gamma, unsigned jobs = 1);

// Extended feature vector kernel: one RBF over all (standardized) columns.
GramMatrix gram_efv(const Matrix& features, double gamma, unsigned jobs = 1);

// sum_j w_j * K_j with K_j = RBF over per_index_features[j] with gammas[j].
// Accumulated in index order, so weights {1, 0, 0} reproduce K_0 bitwise.
GramMatrix gram_lctk(std::span<const Matrix, 3> per_index_features, const LctkWeights& weights,
                     std::array<double, 3> gammas, unsigned jobs = 1);
Matrix combine_kernels(std::span<const Matrix, 3> kernels, const LctkWeights& weights);

// Weisfeiler-Lehman subtree features. Labels are compressed through
// dictionaries filled in first-seen order over the whole batch, so feature
// ids are reproducible. Iteration t gets a fresh id range.
struct WlHistogram {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;  // (feature id, count), id-sorted
};
std::vector<WlHistogram> wl_subtree_features(std::span<const Graph> graphs, int iterations);
double histogram_dot(const WlHistogram& a, const WlHistogram& b);

struct WlOptions {
  bool normalized = false;  // K_ij / sqrt(K_ii K_jj)
};
// Dot products of WL histograms accumulated over iterations 0..h. Initial
// labels are the node labels, or 0 for graphs without labels.
GramMatrix wl_subtree_gram(std::span<const Graph> graphs, int iterations, WlOptions options = {},
                           unsigned jobs = 1);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);

// True iff the smallest eigenvalue is >= -tol. Throws ArgumentError when the
// matrix is not square or is asymmetric by more than 1e-9.
bool check_psd(const Matrix& gram, double tol);
bool check_psd(const GramMatrix& gram, double tol);

}  // namespace topokernel
