#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topokernel/graph.hpp"
#include "topokernel/indices.hpp"
#include "topokernel/kernels.hpp"
#include "topokernel/svm.hpp"

namespace topokernel {

// ---------------------------------------------------------------- folds ----

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold id per sample
  std::uint64_t seed = 0;
  bool holdout = false;  // only fold 1 is a test fold

  // Folds that serve as test sets: all k, or just fold 1 for a holdout plan.
  std::vector<std::size_t> scored_folds() const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
};

// Stratified k-fold split. Each class is shuffled with an mt19937_64 seeded
// by `seed`; the shuffled classes are concatenated (-1 first) and dealt to
// folds round-robin. Throws ArgumentError for k < 2 and StratificationError
// when a present class has fewer than k members.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);

// Stratified single split: roughly `test_fraction` of each class goes to the
// test side. Returned as a two-fold plan where fold 1 is the test set.
FoldPlan stratified_holdout(std::span<const int> labels, double test_fraction, std::uint64_t seed);

// -------------------------------------------------------------- metrics ----

// Throw ArgumentError on a length mismatch or empty input.
double accuracy(std::span<const int> pred, std::span<const int> truth);
// F1 of the +1 class; 0 when precision + recall is 0.
double f1_score(std::span<const int> pred, std::span<const int> truth);

// ------------------------------------------------------- cross-validation --

struct MethodSpec {
  KernelMethod method = KernelMethod::Single;
  Index index = Index::Wiener;  // Single only
  int wl_iterations = 5;        // WL only
  bool wl_normalized = false;   // WL only

  std::string name() const;
  // "WIENER", "ESTRADA", "RANDIC", "EFV", "LCTK" or "WL" (any case).
  static MethodSpec parse(std::string_view name);
};

// One grid cell. weights only matters for LCTK, gamma is ignored by WL.
struct CellParams {
  std::optional<LctkWeights> weights;
  double C = 1.0;
  double gamma = 1.0;
};

struct FoldScore {
  double accuracy = 0.0;
  double f1 = 0.0;
};

struct CvResult {
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population deviation over folds
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
  std::vector<FoldScore> per_fold;
  MethodSpec method;
  CellParams config;
};

struct EvalOptions {
  unsigned jobs = 1;
  SmoConfig smo;
};

// For each fold: z-score features on the training rows, build the train Gram
// and test-to-train kernel rows, train SMO, score the held-out rows.
CvResult cross_validate(const Dataset& dataset, const MethodSpec& method, const CellParams& params,
                        std::size_t k, std::uint64_t seed, const EvalOptions& options = {});

// Same pipeline on an explicit plan (e.g. stratified_holdout).
CvResult evaluate_plan(const Dataset& dataset, const MethodSpec& method, const CellParams& params,
                       const FoldPlan& plan, const EvalOptions& options = {});

// Searched axes. Single/EFV ignore the weights axis and WL also ignores gamma,
// so their cell counts are |C| x |gamma| and |C|.
struct GridConfig {
  std::vector<LctkWeights> weight_vectors;
  std::vector<double> C_grid;
  std::vector<double> gamma_grid;

  // Seven weight vectors, C and gamma in {1e-4, ..., 1e4}: 7 x 9 x 9 cells.
  static GridConfig search_defaults();
  // Cells enumerated weights outer, C middle, gamma inner.
  std::vector<CellParams> cells(KernelMethod method) const;
};

struct GridResult {
  CvResult best;
  std::size_t best_index = 0;
  std::vector<CvResult> table;  // enumeration order of GridConfig::cells
};

// Best = highest mean accuracy, then higher mean F1, then earlier cell.
std::size_t select_best(std::span<const CvResult> table);

GridResult grid_search(const Dataset& dataset, const MethodSpec& method, const GridConfig& grid,
                       std::size_t k, std::uint64_t seed, const EvalOptions& options = {});

// Results CSV: dataset,method,weights,C,gamma,mean_acc,std_acc,mean_f1,std_f1,seed.
// Weights are ';'-separated; fields that do not apply are empty.
std::string results_csv_header();
std::string results_csv_row(const std::string& dataset, const CvResult& result, std::uint64_t seed);

// --------------------------------------------------------------- timing ----

struct TimingReport {
  std::string method;
  std::string dataset;
  std::size_t repetitions = 0;
  double mean_seconds = 0.0;
  double std_seconds = 0.0;  // sample deviation; 0 for one repetition
  std::vector<double> samples;
};

// Wall-clock of fingerprints (or WL relabeling) plus Gram construction,
// excluding dataset loading. Single-threaded.
TimingReport time_gram(const MethodSpec& method, const Dataset& dataset, std::size_t repetitions,
                       const CellParams& params = {});

// Builds the full-dataset Gram for `method`: fingerprints, z-score over all
// graphs, then the kernel.
GramMatrix build_gram(const MethodSpec& method, const Dataset& dataset, const CellParams& params,
                      unsigned jobs = 1);

std::string timing_csv_header();
std::string timing_csv_row(const TimingReport& report);

struct ScalingRow {
  std::size_t n = 0;
  double p = 0.0;
  std::string method;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

// For every size, generates erdos_renyi(n, p, seed) and times the feature
// computation of each method on it (WL uses `wl_iterations`).
std::vector<ScalingRow> scaling_experiment(double p, std::span<const std::size_t> sizes,
                                           std::span<const MethodSpec> methods, std::uint64_t seed,
                                           int wl_iterations = 7);

std::string scaling_csv_header();
std::string scaling_csv_row(const ScalingRow& row);

}  // namespace topokernel
