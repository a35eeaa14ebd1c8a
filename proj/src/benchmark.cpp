#include <chrono>
#include <cmath>

#include "topokernel/error.hpp"
#include "topokernel/eval.hpp"
#include "topokernel/generators.hpp"
#include "topokernel/text_format.hpp"

namespace topokernel {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keeps timed results observable so the work is not optimized away.
volatile double g_sink = 0.0;

}  // namespace

GramMatrix build_gram(const MethodSpec& method, const Dataset& dataset, const CellParams& params,
                      unsigned jobs) {
  switch (method.method) {
    case KernelMethod::WlSubtree:
      return wl_subtree_gram(dataset.graphs, method.wl_iterations, {method.wl_normalized}, jobs);
    case KernelMethod::Single: {
      const std::array<Index, 1> schema{method.index};
      const auto raw = batch_fingerprints(dataset.graphs, schema, jobs).values;
      return gram_single(fit_standardizer(raw).apply(raw), method.index, params.gamma, jobs);
    }
    case KernelMethod::Efv: {
      const auto raw = batch_fingerprints(dataset.graphs, kCanonicalSchema, jobs).values;
      return gram_efv(fit_standardizer(raw).apply(raw), params.gamma, jobs);
    }
    case KernelMethod::Lctk: {
      if (!params.weights) throw ArgumentError("LCTK Gram requires weights");
      const auto raw = batch_fingerprints(dataset.graphs, kCanonicalSchema, jobs).values;
      std::array<Matrix, 3> columns;
      for (std::size_t j = 0; j < 3; ++j) {
        const Matrix col = raw.column(j);
        columns[j] = fit_standardizer(col).apply(col);
      }
      return gram_lctk(columns, *params.weights, {params.gamma, params.gamma, params.gamma}, jobs);
    }
  }
  throw ArgumentError("unknown kernel method");
}

TimingReport time_gram(const MethodSpec& method, const Dataset& dataset, std::size_t repetitions,
                       const CellParams& params) {
  if (repetitions < 1) throw ArgumentError("time_gram: repetitions must be >= 1");
  CellParams p = params;
  if (method.method == KernelMethod::Lctk && !p.weights) p.weights = LctkWeights::search_defaults()[0];

  TimingReport report;
  report.method = method.name();
  report.dataset = dataset.name;
  report.repetitions = repetitions;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = Clock::now();
    const GramMatrix gram = build_gram(method, dataset, p, 1);
    report.samples.push_back(seconds_since(start));
    if (gram.size() > 0) g_sink = g_sink + gram.values(0, 0);
  }
  double sum = 0.0;
  for (double s : report.samples) sum += s;
  report.mean_seconds = sum / static_cast<double>(repetitions);
  if (repetitions > 1) {
    double sq = 0.0;
    for (double s : report.samples) sq += (s - report.mean_seconds) * (s - report.mean_seconds);
    report.std_seconds = std::sqrt(sq / static_cast<double>(repetitions - 1));
  }
  return report;
}

std::string timing_csv_header() { return "dataset,method,reps,mean_s,std_s\n"; }

std::string timing_csv_row(const TimingReport& r) {
  return r.dataset + "," + r.method + "," + std::to_string(r.repetitions) + "," +
         format_double(r.mean_seconds) + "," + format_double(r.std_seconds) + "\n";
}

std::vector<ScalingRow> scaling_experiment(double p, std::span<const std::size_t> sizes,
                                           std::span<const MethodSpec> methods, std::uint64_t seed,
                                           int wl_iterations) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("edge probability must lie in [0, 1]");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] < sizes[i - 1]) throw ArgumentError("scaling sizes must be ascending");
  }
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    const Graph g = erdos_renyi(n, p, seed);
    const std::span<const Graph> one(&g, 1);
    for (const auto& method : methods) {
      const auto start = Clock::now();
      switch (method.method) {
        case KernelMethod::Single:
          g_sink = g_sink + compute_index(g, method.index);
          break;
        case KernelMethod::Efv:
        case KernelMethod::Lctk:
          g_sink = g_sink + fingerprint(g, kCanonicalSchema).values[0];
          break;
        case KernelMethod::WlSubtree:
          g_sink = g_sink + static_cast<double>(wl_subtree_features(one, wl_iterations)[0].counts.size());
          break;
      }
      rows.push_back({n, p, method.name(), seconds_since(start), seed});
    }
  }
  return rows;
}

std::string scaling_csv_header() { return "n,p,method,seconds,seed\n"; }

std::string scaling_csv_row(const ScalingRow& r) {
  return std::to_string(r.n) + "," + format_double(r.p) + "," + r.method + "," +
         format_double(r.seconds) + "," + std::to_string(r.seed) + "\n";
}

}  // namespace topokernel
