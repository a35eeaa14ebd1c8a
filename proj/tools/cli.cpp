#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topokernel/error.hpp"
#include "topokernel/eval.hpp"
#include "topokernel/gram_io.hpp"
#include "topokernel/text_format.hpp"
#include "topokernel/tu_dataset.hpp"

namespace topokernel::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string dataset_dir;
  std::string dataset;
  std::string out;
  unsigned jobs = 0;
};

struct KernelFlags {
  std::string method = "LCTK";
  std::string weights = "1/3,1/3,1/3";
  double gamma = 1.0;
  double C = 1.0;
  int h = 5;
  bool normalize_wl = false;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Key-value record written next to every output file.
class Manifest {
 public:
  explicit Manifest(const std::vector<std::string>& args) : start_(utc_now()) {
    for (std::size_t i = 0; i < args.size(); ++i) command_line_ += (i ? " " : "") + args[i];
  }

  void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }

  static std::filesystem::path path_for(const std::filesystem::path& output) {
    auto p = output;
    p += ".manifest.txt";
    return p;
  }

  void write_for(const std::filesystem::path& output) const {
    std::string text = "tool = topokernel\nversion = " + std::string(kToolVersion) +
                       "\ncommand_line = " + command_line_ + "\noutput = " +
                       output.filename().string() + "\n";
    for (const auto& [k, v] : entries_) text += k + " = " + v + "\n";
    text += "start_time = " + start_ + "\nend_time = " + utc_now() + "\n";
    write_text_file(path_for(output), text);
  }

 private:
  std::string command_line_;
  std::string start_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string resolve_dataset_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return ".";
}

Dataset load(const Common& c) {
  if (c.dataset.empty()) throw UsageError("--dataset is required");
  return load_tu_dataset(resolve_dataset_dir(c.dataset_dir), c.dataset);
}

LctkWeights parse_weights(const std::string& text) {
  const auto fields = split_fields(text, ',');
  if (fields.size() != 3) throw UsageError("--weights needs three comma-separated values");
  try {
    return LctkWeights({parse_real(fields[0]), parse_real(fields[1]), parse_real(fields[2])});
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--weights: ") + e.what());
  }
}

MethodSpec parse_method(const std::string& name, const KernelFlags& k) {
  MethodSpec spec;
  try {
    spec = MethodSpec::parse(name);
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--method: ") + e.what());
  }
  if (k.h < 0) throw UsageError("--h must be non-negative");
  spec.wl_iterations = k.h;
  spec.wl_normalized = k.normalize_wl;
  return spec;
}

CellParams cell_from_flags(const MethodSpec& method, const KernelFlags& k) {
  if (!(k.C > 0.0)) throw UsageError("--c must be positive");
  if (method.method != KernelMethod::WlSubtree && !(k.gamma > 0.0)) {
    throw UsageError("--gamma must be positive");
  }
  CellParams cell;
  cell.C = k.C;
  cell.gamma = k.gamma;
  if (method.method == KernelMethod::Lctk) cell.weights = parse_weights(k.weights);
  return cell;
}

std::vector<MethodSpec> parse_methods(const std::string& list, const KernelFlags& k) {
  std::vector<MethodSpec> out;
  for (const auto& name : split_fields(list, ',')) out.push_back(parse_method(name, k));
  if (out.empty()) throw UsageError("--methods is empty");
  return out;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : split_fields(text, ',')) {
    try {
      out.push_back(parse_real(f));
    } catch (const ArgumentError& e) {
      throw UsageError(what + ": " + e.what());
    }
  }
  return out;
}

// Grid file: lines "weights a,b,c" (repeatable), "C v1,v2,...", "gamma v1,...";
// '#' starts a comment. Axes that are not given keep their default values.
GridConfig read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open grid file " + path.string());
  GridConfig grid = GridConfig::search_defaults();
  bool weights_seen = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key, rest;
    if (!(fields >> key)) continue;
    std::getline(fields, rest);
    const std::string where = "grid file line " + std::to_string(number);
    try {
      if (key == "weights") {
        if (!weights_seen) grid.weight_vectors.clear();
        weights_seen = true;
        grid.weight_vectors.push_back(parse_weights(rest));
      } else if (key == "C" || key == "c") {
        grid.C_grid = parse_real_list(rest, "C");
      } else if (key == "gamma") {
        grid.gamma_grid = parse_real_list(rest, "gamma");
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      throw UsageError(where + ": " + e.what());
    }
    for (double v : grid.C_grid) {
      if (!(v > 0.0)) throw UsageError(where + ": C values must be positive");
    }
    for (double v : grid.gamma_grid) {
      if (!(v > 0.0)) throw UsageError(where + ": gamma values must be positive");
    }
  }
  if (grid.weight_vectors.empty() || grid.C_grid.empty() || grid.gamma_grid.empty()) {
    throw UsageError("grid file " + path.string() + " leaves an axis empty");
  }
  return grid;
}

void add_common(CLI::App* app, Common& c, bool needs_dataset) {
  app->add_option("--dataset-dir", c.dataset_dir,
                  std::string("Directory holding TU dataset files (default: $") + kDataDirEnv +
                      " or .)");
  if (needs_dataset) app->add_option("--dataset", c.dataset, "Dataset name, e.g. MUTAG")->required();
  app->add_option("--out", c.out, "Output file")->required();
  app->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
}

void add_kernel_flags(CLI::App* app, KernelFlags& k, bool with_method = true) {
  if (with_method) {
    app->add_option("--method", k.method, "WIENER, ESTRADA, RANDIC, EFV, LCTK or WL")->capture_default_str();
  }
  app->add_option("--weights", k.weights, "LCTK weights w1,w2,w3 (fractions allowed)")->capture_default_str();
  app->add_option("--gamma", k.gamma, "RBF bandwidth")->capture_default_str();
  app->add_option("--h", k.h, "WL iterations")->capture_default_str();
  app->add_flag("--normalize-wl", k.normalize_wl, "Cosine-normalize the WL kernel");
}

void print_summary(std::ostream& out, const std::string& dataset, const CvResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s C=%g gamma=%g  accuracy %.1f +- %.1f  F1 %.1f +- %.1f\n",
                dataset.c_str(), r.method.name().c_str(), r.config.C, r.config.gamma,
                100 * r.mean_accuracy, 100 * r.std_accuracy, 100 * r.mean_f1, 100 * r.std_f1);
  out << buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological-index graph kernels: fingerprints, Gram matrices, SVM evaluation"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Common common;
  KernelFlags kernel;
  std::string schema = "WIENER,ESTRADA,RANDIC";
  std::size_t k = 10;
  std::uint64_t seed = 42;
  double holdout = 0.0;
  std::string grid_file;
  std::size_t reps = 20;
  std::string methods = "WIENER,ESTRADA,RANDIC,EFV,LCTK,WL";
  double p = 0.15;
  std::string sizes = "100,200,400,800";
  int scaling_h = 7;

  auto* fp = app.add_subcommand("fingerprint", "Write per-graph topological fingerprints as CSV");
  add_common(fp, common, true);
  fp->add_option("--schema", schema, "Comma-separated index list")->capture_default_str();

  auto* gram = app.add_subcommand("gram", "Write a Gram matrix CSV and its metadata sidecar");
  add_common(gram, common, true);
  add_kernel_flags(gram, kernel);

  auto* eval = app.add_subcommand("evaluate", "Stratified k-fold evaluation of one configuration");
  add_common(eval, common, true);
  add_kernel_flags(eval, kernel);
  eval->add_option("--c", kernel.C, "SVM regularization")->capture_default_str();
  eval->add_option("--k", k, "Fold count")->capture_default_str();
  eval->add_option("--seed", seed, "Fold shuffle seed")->capture_default_str();
  eval->add_option("--holdout", holdout, "Use one stratified split with this test fraction (e.g. 0.2)");

  auto* grid = app.add_subcommand("gridsearch", "Exhaustive grid search with k-fold CV");
  add_common(grid, common, true);
  add_kernel_flags(grid, kernel);
  grid->add_option("--grid", grid_file, "Grid file (default: 7 weights x 9 C x 9 gamma)");
  grid->add_option("--k", k, "Fold count")->capture_default_str();
  grid->add_option("--seed", seed, "Fold shuffle seed")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time Gram construction per method");
  add_common(bench, common, true);
  add_kernel_flags(bench, kernel, false);
  bench->add_option("--methods", methods, "Comma-separated method list")->capture_default_str();
  bench->add_option("--reps", reps, "Repetitions")->capture_default_str();

  auto* scaling = app.add_subcommand("scaling", "Feature time on Erdos-Renyi graphs");
  add_common(scaling, common, false);
  scaling->add_option("--p", p, "Edge probability")->capture_default_str();
  scaling->add_option("--sizes", sizes, "Ascending node counts")->capture_default_str();
  scaling->add_option("--methods", methods, "Comma-separated method list")->capture_default_str();
  scaling->add_option("--seed", seed, "Generator seed")->capture_default_str();
  scaling->add_option("--h", scaling_h, "WL iterations")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  Manifest manifest(args);
  const std::filesystem::path out_path = common.out;
  try {
    if (*fp) {
      const auto index_schema = [&] {
        try {
          return parse_schema(schema);
        } catch (const ArgumentError& e) {
          throw UsageError(std::string("--schema: ") + e.what());
        }
      }();
      const Dataset ds = load(common);
      const auto features = batch_fingerprints(ds.graphs, index_schema, common.jobs);
      write_text_file(out_path, fingerprint_csv(features, ds.class_labels));
      manifest.set("dataset", ds.name);
      manifest.set("dataset_dir", resolve_dataset_dir(common.dataset_dir));
      manifest.set("schema", schema);
      manifest.write_for(out_path);
      out << "wrote " << ds.size() << " fingerprints to " << out_path.string() << "\n";
    } else if (*gram) {
      const MethodSpec method = parse_method(kernel.method, kernel);
      const CellParams cell = cell_from_flags(method, kernel);
      const Dataset ds = load(common);
      const auto start = std::chrono::steady_clock::now();
      const GramMatrix g = build_gram(method, ds, cell, common.jobs);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_gram(out_path, g, ds.name, secs, Manifest::path_for(out_path).filename().string());
      manifest.set("dataset", ds.name);
      manifest.set("dataset_dir", resolve_dataset_dir(common.dataset_dir));
      manifest.set("method", method.name());
      manifest.write_for(out_path);
      out << "wrote " << g.size() << "x" << g.size() << " " << method.name() << " Gram to "
          << out_path.string() << "\n";
    } else if (*eval) {
      const MethodSpec method = parse_method(kernel.method, kernel);
      const CellParams cell = cell_from_flags(method, kernel);
      const Dataset ds = load(common);
      EvalOptions options;
      options.jobs = common.jobs;
      const CvResult r =
          holdout > 0.0
              ? evaluate_plan(ds, method, cell, stratified_holdout(ds.class_labels, holdout, seed), options)
              : cross_validate(ds, method, cell, k, seed, options);
      write_text_file(out_path, results_csv_header() + results_csv_row(ds.name, r, seed));
      manifest.set("dataset", ds.name);
      manifest.set("dataset_dir", resolve_dataset_dir(common.dataset_dir));
      manifest.set("seed", std::to_string(seed));
      manifest.set("protocol", holdout > 0.0 ? "holdout " + format_double(holdout)
                                             : std::to_string(k) + "-fold stratified");
      manifest.write_for(out_path);
      print_summary(out, ds.name, r);
    } else if (*grid) {
      const MethodSpec method = parse_method(kernel.method, kernel);
      const GridConfig config = grid_file.empty() ? GridConfig::search_defaults() : read_grid_file(grid_file);
      const Dataset ds = load(common);
      EvalOptions options;
      options.jobs = common.jobs;
      const GridResult result = grid_search(ds, method, config, k, seed, options);
      std::string csv = results_csv_header();
      for (const auto& row : result.table) csv += results_csv_row(ds.name, row, seed);
      write_text_file(out_path, csv);
      manifest.set("dataset", ds.name);
      manifest.set("dataset_dir", resolve_dataset_dir(common.dataset_dir));
      manifest.set("seed", std::to_string(seed));
      manifest.set("grid", grid_file.empty() ? "default" : grid_file);
      manifest.set("cells", std::to_string(result.table.size()));
      manifest.set("best_row", std::to_string(result.best_index + 1));
      manifest.write_for(out_path);
      out << "evaluated " << result.table.size() << " configurations; best:\n";
      print_summary(out, ds.name, result.best);
      if (result.best.config.weights) {
        const auto& w = result.best.config.weights->values();
        out << "  weights " << format_double(w[0]) << "," << format_double(w[1]) << ","
            << format_double(w[2]) << "\n";
      }
    } else if (*bench) {
      if (reps < 1) throw UsageError("--reps must be >= 1");
      const auto method_list = parse_methods(methods, kernel);
      const Dataset ds = load(common);
      CellParams cell;
      cell.gamma = kernel.gamma;
      cell.weights = parse_weights(kernel.weights);
      std::string csv = timing_csv_header();
      for (const auto& m : method_list) {
        const TimingReport r = time_gram(m, ds, reps, cell);
        csv += timing_csv_row(r);
        out << r.dataset << " " << r.method << ": " << r.mean_seconds << " +- " << r.std_seconds
            << " s over " << r.repetitions << " reps\n";
      }
      write_text_file(out_path, csv);
      manifest.set("dataset", ds.name);
      manifest.set("dataset_dir", resolve_dataset_dir(common.dataset_dir));
      manifest.set("reps", std::to_string(reps));
      manifest.write_for(out_path);
    } else if (*scaling) {
      if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
      if (scaling_h < 0) throw UsageError("--h must be non-negative");
      std::vector<std::size_t> size_list;
      for (double v : parse_real_list(sizes, "--sizes")) {
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
          throw UsageError("--sizes must be non-negative integers");
        }
        size_list.push_back(static_cast<std::size_t>(v));
      }
      for (std::size_t i = 1; i < size_list.size(); ++i) {
        if (size_list[i] < size_list[i - 1]) throw UsageError("--sizes must be ascending");
      }
      const auto method_list = parse_methods(methods, kernel);
      const auto rows = scaling_experiment(p, size_list, method_list, seed, scaling_h);
      std::string csv = scaling_csv_header();
      for (const auto& r : rows) csv += scaling_csv_row(r);
      write_text_file(out_path, csv);
      manifest.set("seed", std::to_string(seed));
      manifest.set("p", format_double(p));
      manifest.set("h", std::to_string(scaling_h));
      manifest.write_for(out_path);
      out << "wrote " << rows.size() << " timing rows to " << out_path.string() << "\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace topokernel::cli
