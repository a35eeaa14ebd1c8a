#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "topokernel/kernels.hpp"
#include "topokernel/matrix.hpp"

namespace topokernel {

struct SmoConfig {
  // Stop once the maximal KKT violation m(alpha) - M(alpha) drops below this.
  double tolerance = 1e-3;
  // Consecutive iterations that leave alpha unchanged before giving up.
  std::size_t max_passes = 10;
  // Hard iteration cap; 0 means 1000 * n.
  std::size_t max_iterations = 0;
  // Compute the smallest Gram eigenvalue before training and record a
  // warning when it is below -psd_tolerance * n. O(n^3).
  bool verify_psd = false;
  double psd_tolerance = 1e-8;
  // Keep the dual objective at the start and after every iteration in
  // SvmModel::objective_trace.
  bool record_objective = false;
};

// Soft-margin SVM trained on a precomputed kernel.
struct SvmModel {
  std::vector<double> alpha;            // in [0, C]
  double bias = 0.0;
  std::vector<int> train_labels;        // in {-1, +1}
  std::vector<std::size_t> support_indices;  // alpha > 0
  double C = 1.0;

  // Solver diagnostics; not serialized.
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  std::vector<double> objective_trace;
};

// Sequential minimal optimization with second-order working-set selection.
// Throws ArgumentError on shape mismatches or C <= 0 and TrainingError when
// only one class is present.
SvmModel train_smo(const Matrix& gram, std::span<const int> labels, double C,
                   const SmoConfig& cfg = {});
SvmModel train_smo(const GramMatrix& gram, std::span<const int> labels, double C,
                   const SmoConfig& cfg = {});

// sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
double dual_objective(std::span<const double> alpha, const Matrix& gram, std::span<const int> labels);
double dual_objective(const SvmModel& model, const Matrix& gram, std::span<const int> labels);

// sum_i alpha_i y_i k_row[i] + b. Throws ArgumentError on a length mismatch.
double decision_value(const SvmModel& model, std::span<const double> kernel_row);
// Sign of the decision value; zero maps to +1.
int predict_label(const SvmModel& model, std::span<const double> kernel_row);
// Labels for every row of a (test x train) kernel block.
std::vector<int> predict(const SvmModel& model, const Matrix& kernel_rows);

// Largest KKT violation of any training point under the model's bias,
// using y_i f(x_i) against the margin.
double max_kkt_violation(const SvmModel& model, const Matrix& gram);

// Line-oriented text format with 17 significant digits:
//   svm-model v1 / C / bias / n / labels / alpha / support
void save_model(std::ostream& out, const SvmModel& model);
// Throws FormatError on malformed input.
SvmModel load_model(std::istream& in);

}  // namespace topokernel
