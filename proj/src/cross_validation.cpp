#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "topokernel/error.hpp"
#include "topokernel/eval.hpp"
#include "topokernel/parallel.hpp"
#include "topokernel/text_format.hpp"

namespace topokernel {

std::string MethodSpec::name() const { return kernel_method_name(method, index); }

MethodSpec MethodSpec::parse(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  MethodSpec spec;
  if (upper == "EFV") {
    spec.method = KernelMethod::Efv;
  } else if (upper == "LCTK") {
    spec.method = KernelMethod::Lctk;
  } else if (upper == "WL" || upper == "WL_SUBTREE") {
    spec.method = KernelMethod::WlSubtree;
  } else {
    spec.method = KernelMethod::Single;
    spec.index = parse_index(upper);
  }
  return spec;
}

GridConfig GridConfig::search_defaults() {
  GridConfig grid;
  grid.weight_vectors = LctkWeights::search_defaults();
  for (int e = -4; e <= 4; ++e) {
    grid.C_grid.push_back(std::pow(10.0, e));
    grid.gamma_grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

std::vector<CellParams> GridConfig::cells(KernelMethod method) const {
  std::vector<CellParams> out;
  switch (method) {
    case KernelMethod::Lctk:
      for (const auto& w : weight_vectors) {
        for (double c : C_grid) {
          for (double g : gamma_grid) out.push_back({w, c, g});
        }
      }
      break;
    case KernelMethod::Single:
    case KernelMethod::Efv:
      for (double c : C_grid) {
        for (double g : gamma_grid) out.push_back({std::nullopt, c, g});
      }
      break;
    case KernelMethod::WlSubtree:
      for (double c : C_grid) out.push_back({std::nullopt, c, 0.0});
      break;
  }
  return out;
}

namespace {

std::vector<Index> feature_schema(const MethodSpec& method) {
  if (method.method == KernelMethod::Single) return {method.index};
  return {kCanonicalSchema.begin(), kCanonicalSchema.end()};
}

std::vector<int> gather(std::span<const int> labels, std::span<const std::size_t> ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(labels[i]);
  return out;
}

FoldScore score_fold(const Matrix& train_gram, const Matrix& test_block,
                     std::span<const int> train_labels, std::span<const int> test_labels, double C,
                     const SmoConfig& smo) {
  const SvmModel model = train_smo(train_gram, train_labels, C, smo);
  const auto pred = predict(model, test_block);
  return {accuracy(pred, test_labels), f1_score(pred, test_labels)};
}

// Train/test kernel blocks for one fold.
struct FoldKernels {
  Matrix train;  // train x train
  Matrix test;   // test x train
};

FoldKernels rbf_fold_kernels(const Matrix& raw, std::span<const std::size_t> train,
                             std::span<const std::size_t> test, double gamma) {
  std::vector<std::size_t> cols(raw.cols());
  for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c;
  const auto stats = fit_standardizer(raw, train);
  const Matrix z_train = stats.apply(raw.select(train, cols));
  const Matrix z_test = stats.apply(raw.select(test, cols));
  return {rbf_gram(z_train, gamma), rbf_block(z_test, z_train, gamma)};
}

// Scores for every (cell, fold) pair; result[cell][fold].
std::vector<std::vector<FoldScore>> run_cells(const Dataset& dataset, const MethodSpec& method,
                                              std::span<const CellParams> cells,
                                              const FoldPlan& plan, const EvalOptions& options) {
  dataset.validate();
  if (plan.assignments.size() != dataset.size()) throw ArgumentError("fold plan size mismatch");
  const auto folds = plan.scored_folds();
  const std::size_t k = folds.size();
  std::vector<std::vector<FoldScore>> scores(cells.size(), std::vector<FoldScore>(k));
  std::vector<std::vector<std::size_t>> train(k), test(k);
  for (std::size_t f = 0; f < k; ++f) {
    train[f] = plan.train_indices(folds[f]);
    test[f] = plan.test_indices(folds[f]);
    if (test[f].empty() || train[f].empty()) {
      throw ArgumentError("fold " + std::to_string(folds[f]) + " has an empty side");
    }
  }
  const auto& labels = dataset.class_labels;

  const auto guarded = [&](std::size_t fold, auto&& body) {
    try {
      body();
    } catch (const TrainingError& e) {
      throw TrainingError("fold " + std::to_string(fold) + ": " + e.what());
    }
  };

  if (method.method == KernelMethod::WlSubtree) {
    const GramMatrix full = wl_subtree_gram(dataset.graphs, method.wl_iterations,
                                            {method.wl_normalized}, options.jobs);
    parallel_for(k, options.jobs, [&](std::size_t f) {
      guarded(f, [&] {
        const Matrix tr = full.values.select(train[f], train[f]);
        const Matrix te = full.values.select(test[f], train[f]);
        const auto y_tr = gather(labels, train[f]), y_te = gather(labels, test[f]);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          scores[c][f] = score_fold(tr, te, y_tr, y_te, cells[c].C, options.smo);
        }
      });
    });
    return scores;
  }

  if (method.method == KernelMethod::Lctk) {
    for (const auto& cell : cells) {
      if (!cell.weights) throw ArgumentError("LCTK evaluation requires weights");
    }
  }

  const auto schema = feature_schema(method);
  const Matrix raw = batch_fingerprints(dataset.graphs, schema, options.jobs).values;

  // Group cells by gamma so per-fold kernels are built once per (fold, gamma).
  std::vector<double> gammas;
  std::vector<std::size_t> gamma_of_cell(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto it = std::find(gammas.begin(), gammas.end(), cells[c].gamma);
    if (it == gammas.end()) it = gammas.insert(gammas.end(), cells[c].gamma);
    gamma_of_cell[c] = static_cast<std::size_t>(it - gammas.begin());
  }

  const std::size_t tasks = k * gammas.size();
  parallel_for(tasks, options.jobs, [&](std::size_t task) {
    const std::size_t f = task / gammas.size();
    const std::size_t gi = task % gammas.size();
    guarded(f, [&] {
      const double gamma = gammas[gi];
      const auto y_tr = gather(labels, train[f]), y_te = gather(labels, test[f]);
      if (method.method != KernelMethod::Lctk) {
        const FoldKernels kern = rbf_fold_kernels(raw, train[f], test[f], gamma);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (gamma_of_cell[c] != gi) continue;
          scores[c][f] = score_fold(kern.train, kern.test, y_tr, y_te, cells[c].C, options.smo);
        }
        return;
      }
      std::array<Matrix, 3> tr_parts, te_parts;
      for (std::size_t j = 0; j < 3; ++j) {
        FoldKernels kern = rbf_fold_kernels(raw.column(j), train[f], test[f], gamma);
        tr_parts[j] = std::move(kern.train);
        te_parts[j] = std::move(kern.test);
      }
      // Cells sharing this gamma, grouped by weight vector.
      std::vector<std::size_t> pending;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (gamma_of_cell[c] == gi) pending.push_back(c);
      }
      while (!pending.empty()) {
        const LctkWeights w = *cells[pending.front()].weights;
        const Matrix tr = combine_kernels(tr_parts, w);
        const Matrix te = combine_kernels(te_parts, w);
        std::vector<std::size_t> rest;
        for (std::size_t c : pending) {
          if (*cells[c].weights == w) {
            scores[c][f] = score_fold(tr, te, y_tr, y_te, cells[c].C, options.smo);
          } else {
            rest.push_back(c);
          }
        }
        pending = std::move(rest);
      }
    });
  });
  return scores;
}

CvResult summarize(std::vector<FoldScore> per_fold, const MethodSpec& method,
                   const CellParams& params) {
  CvResult r;
  r.method = method;
  r.config = params;
  const auto n = static_cast<double>(per_fold.size());
  for (const auto& s : per_fold) {
    r.mean_accuracy += s.accuracy;
    r.mean_f1 += s.f1;
  }
  r.mean_accuracy /= n;
  r.mean_f1 /= n;
  for (const auto& s : per_fold) {
    r.std_accuracy += (s.accuracy - r.mean_accuracy) * (s.accuracy - r.mean_accuracy);
    r.std_f1 += (s.f1 - r.mean_f1) * (s.f1 - r.mean_f1);
  }
  r.std_accuracy = std::sqrt(r.std_accuracy / n);
  r.std_f1 = std::sqrt(r.std_f1 / n);
  r.per_fold = std::move(per_fold);
  return r;
}

}  // namespace

CvResult evaluate_plan(const Dataset& dataset, const MethodSpec& method, const CellParams& params,
                       const FoldPlan& plan, const EvalOptions& options) {
  const std::vector<CellParams> cells{params};
  auto scores = run_cells(dataset, method, cells, plan, options);
  return summarize(std::move(scores[0]), method, params);
}

CvResult cross_validate(const Dataset& dataset, const MethodSpec& method, const CellParams& params,
                        std::size_t k, std::uint64_t seed, const EvalOptions& options) {
  return evaluate_plan(dataset, method, params,
                       stratified_kfold(dataset.class_labels, k, seed), options);
}

std::size_t select_best(std::span<const CvResult> table) {
  if (table.empty()) throw ArgumentError("select_best: empty table");
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& a = table[i];
    const auto& b = table[best];
    if (a.mean_accuracy > b.mean_accuracy ||
        (a.mean_accuracy == b.mean_accuracy && a.mean_f1 > b.mean_f1)) {
      best = i;
    }
  }
  return best;
}

GridResult grid_search(const Dataset& dataset, const MethodSpec& method, const GridConfig& grid,
                       std::size_t k, std::uint64_t seed, const EvalOptions& options) {
  const auto cells = grid.cells(method.method);
  if (cells.empty()) throw ArgumentError("grid_search: empty grid");
  const FoldPlan plan = stratified_kfold(dataset.class_labels, k, seed);
  auto scores = run_cells(dataset, method, cells, plan, options);
  GridResult result;
  result.table.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    result.table.push_back(summarize(std::move(scores[c]), method, cells[c]));
  }
  result.best_index = select_best(result.table);
  result.best = result.table[result.best_index];
  return result;
}

std::string results_csv_header() {
  return "dataset,method,weights,C,gamma,mean_acc,std_acc,mean_f1,std_f1,seed\n";
}

std::string results_csv_row(const std::string& dataset, const CvResult& r, std::uint64_t seed) {
  std::string weights;
  if (r.config.weights) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (j) weights += ';';
      weights += format_double((*r.config.weights)[j]);
    }
  }
  const std::string gamma =
      r.method.method == KernelMethod::WlSubtree ? std::string() : format_double(r.config.gamma);
  return dataset + "," + r.method.name() + "," + weights + "," + format_double(r.config.C) + "," +
         gamma + "," + format_double(r.mean_accuracy) + "," + format_double(r.std_accuracy) + "," +
         format_double(r.mean_f1) + "," + format_double(r.std_f1) + "," + std::to_string(seed) +
         "\n";
}

}  // namespace topokernel
