#include "topokernel/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "topokernel/error.hpp"
#include "topokernel/parallel.hpp"

namespace topokernel {

double rbf(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) {
    throw ArgumentError("rbf: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
  }
  if (!(gamma >= 0.0)) throw ArgumentError("rbf: gamma must be non-negative");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

Matrix StandardizationStats::apply(const Matrix& features) const {
  if (features.cols() != mean.size()) throw ArgumentError("standardizer: column count mismatch");
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      out(r, c) = (features(r, c) - mean[c]) / stddev[c];
    }
  }
  return out;
}

StandardizationStats fit_standardizer(const Matrix& features, std::span<const std::size_t> rows) {
  if (rows.empty()) throw ArgumentError("standardizer needs at least one row");
  const std::size_t cols = features.cols();
  StandardizationStats stats{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
  const auto count = static_cast<double>(rows.size());
  for (std::size_t c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += features(r, c);
    const double mean = sum / count;
    double sq = 0.0;
    for (std::size_t r : rows) {
      const double d = features(r, c) - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / count);
    stats.mean[c] = mean;
    stats.stddev[c] = sd < 1e-12 ? 1.0 : sd;
  }
  return stats;
}

StandardizationStats fit_standardizer(const Matrix& train_features) {
  std::vector<std::size_t> rows(train_features.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return fit_standardizer(train_features, rows);
}

LctkWeights::LctkWeights(std::array<double, 3> w) : w_(w) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError("LCTK weights must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ArgumentError("LCTK weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

std::vector<LctkWeights> LctkWeights::search_defaults() {
  return {
      LctkWeights({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}),
      LctkWeights({0.5, 0.3, 0.2}),
      LctkWeights({0.2, 0.5, 0.3}),
      LctkWeights({0.3, 0.2, 0.5}),
      LctkWeights({0.8, 0.1, 0.1}),
      LctkWeights({0.1, 0.8, 0.1}),
      LctkWeights({0.1, 0.1, 0.8}),
  };
}

std::string kernel_method_name(KernelMethod method, std::optional<Index> index) {
  switch (method) {
    case KernelMethod::Single:
      return index ? std::string(index_name(*index)) : "SINGLE";
    case KernelMethod::Efv:
      return "EFV";
    case KernelMethod::Lctk:
      return "LCTK";
    case KernelMethod::WlSubtree:
      return "WL";
  }
  return "UNKNOWN";
}

Matrix rbf_block(const Matrix& a, const Matrix& b, double gamma, unsigned jobs) {
  if (a.cols() != b.cols()) throw ArgumentError("rbf_block: column count mismatch");
  Matrix out(a.rows(), b.rows());
  parallel_for(a.rows(), jobs, [&](std::size_t i) {
    const auto x = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = rbf(x, b.row(j), gamma);
  });
  return out;
}

Matrix rbf_gram(const Matrix& features, double gamma, unsigned jobs) {
  const std::size_t n = features.rows();
  Matrix out(n, n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto x = features.row(i);
    out(i, i) = rbf(x, x, gamma);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf(x, features.row(j), gamma);
      out(i, j) = k;
      out(j, i) = k;
    }
  });
  return out;
}

GramMatrix gram_single(const Matrix& features, Index index, double gamma, unsigned jobs) {
  if (features.cols() != 1) throw ArgumentError("gram_single expects an n x 1 feature matrix");
  GramMatrix gram{rbf_gram(features, gamma, jobs), KernelMethod::Single, {}};
  gram.params.index = index;
  gram.params.gammas = {gamma};
  return gram;
}

GramMatrix gram_efv(const Matrix& features, double gamma, unsigned jobs) {
  GramMatrix gram{rbf_gram(features, gamma, jobs), KernelMethod::Efv, {}};
  gram.params.gammas = {gamma};
  return gram;
}

Matrix combine_kernels(std::span<const Matrix, 3> kernels, const LctkWeights& weights) {
  const std::size_t rows = kernels[0].rows(), cols = kernels[0].cols();
  for (const auto& k : kernels) {
    if (k.rows() != rows || k.cols() != cols) throw ArgumentError("LCTK: kernel shape mismatch");
  }
  Matrix out(rows, cols);
  auto dst = out.data();
  const auto k0 = kernels[0].data(), k1 = kernels[1].data(), k2 = kernels[2].data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = weights[0] * k0[i] + weights[1] * k1[i] + weights[2] * k2[i];
  }
  return out;
}

GramMatrix gram_lctk(std::span<const Matrix, 3> per_index_features, const LctkWeights& weights,
                     std::array<double, 3> gammas, unsigned jobs) {
  std::array<Matrix, 3> kernels;
  for (std::size_t j = 0; j < 3; ++j) {
    if (per_index_features[j].cols() != 1) throw ArgumentError("LCTK expects n x 1 columns");
    kernels[j] = rbf_gram(per_index_features[j], gammas[j], jobs);
  }
  GramMatrix gram{combine_kernels(kernels, weights), KernelMethod::Lctk, {}};
  gram.params.gammas.assign(gammas.begin(), gammas.end());
  gram.params.weights = weights;
  return gram;
}

double min_eigenvalue(const Matrix& symmetric) {
  const auto n = static_cast<Eigen::Index>(symmetric.rows());
  if (n == 0) return 0.0;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> map(
      symmetric.data().data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(map, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

bool check_psd(const Matrix& gram, double tol) {
  if (gram.rows() != gram.cols()) throw ArgumentError("check_psd: matrix is not square");
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    for (std::size_t j = i + 1; j < gram.cols(); ++j) {
      if (std::abs(gram(i, j) - gram(j, i)) > 1e-9) {
        throw ArgumentError("check_psd: matrix is not symmetric at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
    }
  }
  return min_eigenvalue(gram) >= -tol;
}

bool check_psd(const GramMatrix& gram, double tol) { return check_psd(gram.values, tol); }

}  // namespace topokernel
