// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// when any selected criterion fails. CSV artifacts of every run go under
// --out-dir so reruns can be compared byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "topokernel/eval.hpp"
#include "topokernel/generators.hpp"
#include "topokernel/indices.hpp"
#include "topokernel/kernels.hpp"
#include "topokernel/parallel.hpp"
#include "topokernel/svm.hpp"
#include "topokernel/text_format.hpp"
#include "topokernel/tu_dataset.hpp"

namespace fs = std::filesystem;
using namespace topokernel;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Context {
  fs::path data_dir;
  fs::path out_dir;
  unsigned jobs = 1;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void write_csv(const Context& ctx, const std::string& name, const std::string& text) {
  write_text_file(ctx.out_dir / name, text);
}

std::map<std::string, Dataset> g_datasets;

const Dataset* find_dataset(const Context& ctx, const std::string& name) {
  if (auto it = g_datasets.find(name); it != g_datasets.end()) return &it->second;
  const fs::path dir = ctx.data_dir / name;
  if (!fs::exists(dir / (name + "_A.txt"))) return nullptr;
  return &g_datasets.emplace(name, load_tu_dataset(dir, name)).first->second;
}

// ------------------------------------------------------------------ 1 ------

Outcome index_oracles(const Context& ctx) {
  const double ps[] = {0.1, 0.3, 0.6};
  Rng sizes(kSeed);
  std::string csv = "graph,n,p,wiener,estrada,randic\n";
  std::size_t wiener_bad = 0, randic_bad = 0, estrada_bad = 0;
  double worst_estrada = 0.0, worst_randic = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t n = 1 + uniform_index(sizes, 30);
    const double p = ps[i % 3];
    const Graph g = erdos_renyi(n, p, kSeed + i);
    const double w = wiener_index(g), e = estrada_index(g), r = randic_index(g);
    if (w != static_cast<double>(oracle::wiener(g))) ++wiener_bad;
    const double dr = std::abs(r - oracle::randic(g));
    worst_randic = std::max(worst_randic, dr);
    if (dr > 1e-12) ++randic_bad;
    const double t = oracle::taylor_estrada(g);
    const double de = std::abs(e - t) / t;
    worst_estrada = std::max(worst_estrada, de);
    if (de > 1e-8) ++estrada_bad;
    csv += std::to_string(i) + "," + std::to_string(n) + "," + format_double(p) + "," + format_double(w) +
           "," + format_double(e) + "," + format_double(r) + "\n";
  }
  write_csv(ctx, "c1_indices.csv", csv);
  return {wiener_bad + randic_bad + estrada_bad == 0,
          "200 ER graphs; Wiener mismatches " + std::to_string(wiener_bad) + ", max Randic abs err " +
              fmt("%.2e", worst_randic) + ", max Estrada rel err " + fmt("%.2e", worst_estrada)};
}

// ------------------------------------------------------------------ 2 ------

Outcome isomorphism(const Context& ctx) {
  Rng rng(kSeed);
  std::string csv = "graph,perm,wiener,estrada,randic\n";
  std::size_t bad = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t n = 5 + uniform_index(rng, 36);
    const double p = 0.05 + 0.5 * uniform01(rng);
    const Graph g = erdos_renyi(n, p, kSeed * 1000 + i);
    const double w = wiener_index(g), e = estrada_index(g), r = randic_index(g);
    for (std::size_t k = 0; k < 5; ++k) {
      const Graph h = permute_nodes(g, oracle::random_permutation(n, rng));
      const double wh = wiener_index(h), eh = estrada_index(h), rh = randic_index(h);
      const double de = std::abs(eh - e) / std::abs(e);
      const double dr = r == 0.0 ? std::abs(rh) : std::abs(rh - r) / std::abs(r);
      worst = std::max({worst, de, dr});
      if (wh != w || de > 1e-9 || dr > 1e-9) ++bad;
      csv += std::to_string(i) + "," + std::to_string(k) + "," + format_double(wh) + "," +
             format_double(eh) + "," + format_double(rh) + "\n";
    }
  }
  write_csv(ctx, "c2_isomorphism.csv", csv);
  return {bad == 0, "250 relabelings; violations " + std::to_string(bad) + ", max rel drift " +
                        fmt("%.2e", worst)};
}

// ------------------------------------------------------------------ 3 ------

Outcome kernel_validity(const Context& ctx) {
  const Dataset* ds = find_dataset(ctx, "MUTAG");
  if (!ds) return {false, "MUTAG not found under " + ctx.data_dir.string()};
  const double n = static_cast<double>(ds->size());
  const auto grid = GridConfig::search_defaults();
  std::string csv = "method,weights,gamma,min_eigenvalue,max_diag_dev,min_entry,max_entry\n";
  std::size_t bad = 0, checked = 0;
  double lowest = 0.0;
  auto audit = [&](const MethodSpec& m, const CellParams& p, const std::string& wname) {
    const GramMatrix k = build_gram(m, *ds, p, ctx.jobs);
    double diag = 0.0, lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      diag = std::max(diag, std::abs(k(i, i) - 1.0));
      for (std::size_t j = 0; j < k.size(); ++j) {
        lo = std::min(lo, k(i, j));
        hi = std::max(hi, k(i, j));
      }
    }
    const double ev = min_eigenvalue(k.values);
    lowest = std::min(lowest, ev);
    const bool ok = check_psd(k, 1e-8 * n) && diag <= 1e-12 && lo >= 0.0 && hi <= 1.0;
    bad += !ok;
    ++checked;
    csv += m.name() + "," + wname + "," + format_double(p.gamma) + "," + format_double(ev) + "," +
           format_double(diag) + "," + format_double(lo) + "," + format_double(hi) + "\n";
  };
  for (double gamma : grid.gamma_grid) {
    audit(MethodSpec::parse("EFV"), {std::nullopt, 1.0, gamma}, "");
    for (const auto& w : grid.weight_vectors) {
      const auto& v = w.values();
      audit(MethodSpec::parse("LCTK"), {w, 1.0, gamma},
            format_double(v[0]) + ";" + format_double(v[1]) + ";" + format_double(v[2]));
    }
  }
  write_csv(ctx, "c3_kernels.csv", csv);
  return {bad == 0, std::to_string(checked) + " MUTAG Gram matrices (EFV + 7 LCTK weightings x " +
                        std::to_string(grid.gamma_grid.size()) + " gammas); failures " +
                        std::to_string(bad) + ", lowest eigenvalue " + fmt("%.2e", lowest)};
}

// ------------------------------------------------------------------ 4 ------

Outcome smo_correctness(const Context& ctx) {
  const double Cs[] = {0.1, 1.0, 10.0};
  Rng rng(kSeed);
  std::string csv = "instance,n,C,smo_objective,oracle_objective,kkt_violation\n";
  std::size_t bad = 0;
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t n = 2 + uniform_index(rng, 7);
    const Matrix K = oracle::random_psd(n, 1 + uniform_index(rng, n), rng);
    std::vector<int> y(n);
    for (auto& v : y) v = uniform01(rng) < 0.5 ? -1 : 1;
    // Both classes must be present.
    const std::size_t neg = uniform_index(rng, n);
    y[neg] = -1;
    y[(neg + 1 + uniform_index(rng, n - 1)) % n] = 1;
    const double C = Cs[i % 3];
    SmoConfig cfg;
    cfg.tolerance = 1e-9;
    const SvmModel m = train_smo(K, y, C, cfg);
    const double obj = dual_objective(m, K, y);
    const double ref = oracle::svm_dual_optimum(K, y, C);
    const double gap = std::abs(obj - ref) / std::max(1.0, std::abs(ref));
    const double kkt = max_kkt_violation(m, K);
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kkt);
    if (gap > 1e-6 || kkt > 1e-6) ++bad;
    csv += std::to_string(i) + "," + std::to_string(n) + "," + format_double(C) + "," + format_double(obj) +
           "," + format_double(ref) + "," + format_double(kkt) + "\n";
  }
  write_csv(ctx, "c4_smo.csv", csv);
  return {bad == 0, "100 instances; failures " + std::to_string(bad) + ", max relative gap " +
                        fmt("%.2e", worst_gap) + ", max KKT violation " + fmt("%.2e", worst_kkt)};
}

// -------------------------------------------------------------- 5 and 7 ----

struct GridRun {
  std::map<std::string, CvResult> best;
};

GridRun run_grids(const Context& ctx, const Dataset& ds, const std::vector<std::string>& methods,
                  const std::string& prefix) {
  GridRun run;
  EvalOptions opts;
  opts.jobs = ctx.jobs;
  const auto grid = GridConfig::search_defaults();
  for (const auto& name : methods) {
    const auto result = grid_search(ds, MethodSpec::parse(name), grid, 10, kSeed, opts);
    std::string csv = results_csv_header();
    for (const auto& row : result.table) csv += results_csv_row(ds.name, row, kSeed);
    write_csv(ctx, prefix + "_" + name + ".csv", csv);
    run.best[name] = result.best;
  }
  return run;
}

std::string describe(const std::string& name, const CvResult& r) {
  return name + " acc " + fmt("%.3f", r.mean_accuracy) + " +- " + fmt("%.3f", r.std_accuracy) + " F1 " +
         fmt("%.3f", r.mean_f1);
}

std::map<fs::path, GridRun> g_mutag_runs;

const GridRun* mutag_grids(const Context& ctx) {
  if (auto it = g_mutag_runs.find(ctx.out_dir); it != g_mutag_runs.end()) return &it->second;
  const Dataset* ds = find_dataset(ctx, "MUTAG");
  if (!ds) return nullptr;
  return &g_mutag_runs.emplace(ctx.out_dir, run_grids(ctx, *ds, {"LCTK", "WIENER", "EFV"}, "c5_mutag"))
              .first->second;
}

Outcome mutag_accuracy(const Context& ctx) {
  const GridRun* run = mutag_grids(ctx);
  if (!run) return {false, "MUTAG not found under " + ctx.data_dir.string()};
  const auto& lctk = run->best.at("LCTK");
  const auto& wiener = run->best.at("WIENER");
  return {lctk.mean_accuracy >= 0.85 && wiener.mean_accuracy >= 0.70,
          describe("LCTK", lctk) + " (need >= 0.85); " + describe("WIENER", wiener) + " (need >= 0.70)"};
}

Outcome mutag_f1(const Context& ctx) {
  const GridRun* run = mutag_grids(ctx);
  if (!run) return {false, "MUTAG not found under " + ctx.data_dir.string()};
  const auto& efv = run->best.at("EFV");
  return {efv.mean_f1 >= 0.82, describe("EFV", efv) + " (need F1 >= 0.82)"};
}

// ------------------------------------------------------------------ 6 ------

Outcome aids_accuracy(const Context& ctx) {
  const Dataset* ds = find_dataset(ctx, "AIDS");
  if (!ds) {
    return {false, "AIDS dataset not found under " + (ctx.data_dir / "AIDS").string() +
                       "; place the TU Dortmund AIDS files there to run this check"};
  }
  const GridRun run = run_grids(ctx, *ds, {"ESTRADA", "EFV"}, "c6_aids");
  const auto& estrada = run.best.at("ESTRADA");
  const auto& efv = run.best.at("EFV");
  return {estrada.mean_accuracy >= 0.98 && efv.mean_accuracy >= 0.99,
          describe("ESTRADA", estrada) + " (need >= 0.98); " + describe("EFV", efv) + " (need >= 0.99)"};
}

// ------------------------------------------------------------------ 8 ------

Outcome relative_timing(const Context& ctx) {
  const Dataset* ds = find_dataset(ctx, "MUTAG");
  if (!ds) return {false, "MUTAG not found under " + ctx.data_dir.string()};
  std::string csv = timing_csv_header();
  std::map<std::string, TimingReport> reports;
  for (const char* name : {"WIENER", "ESTRADA", "RANDIC", "EFV", "LCTK", "WL"}) {
    reports[name] = time_gram(MethodSpec::parse(name), *ds, 20);
    csv += timing_csv_row(reports[name]);
  }
  write_csv(ctx, "c8_timing.csv", csv);
  const double randic = reports["RANDIC"].mean_seconds, wl = reports["WL"].mean_seconds;
  return {randic <= 0.5 * wl, "RANDIC " + fmt("%.3g", randic) + " s, WL " + fmt("%.3g", wl) +
                                  " s, ratio WL/RANDIC " + fmt("%.1f", wl / randic) + " (need >= 2)"};
}

// ------------------------------------------------------------------ 9 ------

Outcome scaling_trend(const Context& ctx) {
  const std::vector<std::size_t> sizes{100, 200, 400, 800};
  std::vector<MethodSpec> methods;
  for (const char* name : {"WIENER", "ESTRADA", "RANDIC", "EFV", "LCTK", "WL"}) {
    methods.push_back(MethodSpec::parse(name));
  }
  const auto rows = scaling_experiment(0.15, sizes, methods, kSeed, 7);
  std::string csv = scaling_csv_header();
  double randic = 0.0, wl = 0.0;
  for (const auto& r : rows) {
    csv += scaling_csv_row(r);
    if (r.n == 800 && r.method == "RANDIC") randic = r.seconds;
    if (r.n == 800 && r.method == "WL") wl = r.seconds;
  }
  write_csv(ctx, "c9_scaling.csv", csv);
  return {randic < wl, "n = 800: RANDIC " + fmt("%.3g", randic) + " s, WL(h=7) " + fmt("%.3g", wl) + " s"};
}

// ----------------------------------------------------------------- 10 ------

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 = no limit
  std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "index oracles", 10, index_oracles},
      {2, "isomorphism invariance", 5, isomorphism},
      {3, "kernel validity", 30, kernel_validity},
      {4, "SMO correctness", 30, smo_correctness},
      {5, "MUTAG accuracy", 600, mutag_accuracy},
      {6, "AIDS accuracy", 1800, aids_accuracy},
      {7, "MUTAG F1", 600, mutag_f1},
      {8, "relative timing", 0, relative_timing},
      {9, "scaling trend", 300, scaling_trend},
  };
  return all;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Blanks the given comma-separated columns of every data row.
std::string mask_columns(const std::string& csv, std::vector<std::size_t> cols) {
  std::istringstream in(csv);
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header) {
      auto fields = split_fields(line, ',');
      for (auto c : cols)
        if (c < fields.size()) fields[c] = "*";
      line.clear();
      for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + fields[i];
    }
    header = false;
    out += line + "\n";
  }
  return out;
}

// Wall-clock columns are the only ones allowed to differ between runs.
std::string comparable(const fs::path& file) {
  const std::string text = read_file(file);
  const std::string name = file.filename().string();
  if (name == "c8_timing.csv") return mask_columns(text, {3, 4});
  if (name == "c9_scaling.csv") return mask_columns(text, {3});
  return text;
}

Outcome determinism(const Context& ctx) {
  const Context first{ctx.data_dir, ctx.out_dir / "run_a", 1};
  const Context second{ctx.data_dir, ctx.out_dir / "run_b", std::max(4u, default_jobs())};
  for (const auto& c : {first, second}) {
    fs::remove_all(c.out_dir);
    fs::create_directories(c.out_dir);
    for (const auto& crit : criteria()) crit.run(c);
  }
  std::size_t compared = 0, differing = 0;
  std::string diff_names;
  for (const auto& entry : fs::directory_iterator(first.out_dir)) {
    const fs::path other = second.out_dir / entry.path().filename();
    ++compared;
    if (!fs::exists(other) || comparable(entry.path()) != comparable(other)) {
      ++differing;
      diff_names += " " + entry.path().filename().string();
    }
  }
  for (const auto& entry : fs::directory_iterator(second.out_dir)) {
    if (!fs::exists(first.out_dir / entry.path().filename())) {
      ++differing;
      diff_names += " " + entry.path().filename().string();
    }
  }
  std::string detail = std::to_string(compared) + " CSV files compared across two runs (jobs 1 vs " +
                       std::to_string(second.jobs) + "), " + std::to_string(differing) + " differ";
  if (differing) detail += ":" + diff_names;
  if (!find_dataset(ctx, "AIDS")) detail += "; AIDS outputs absent from both runs";
  return {compared > 0 && differing == 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  Context ctx;
  std::string data_dir = TOPOKERNEL_TEST_DATA_DIR;
  if (const char* env = std::getenv("TOPOKERNEL_DATA_DIR"); env && *env) data_dir = env;
  std::string out_dir = "acceptance_out";
  unsigned jobs = 0;
  app.add_option("--criterion", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--data-dir", data_dir, "Directory holding MUTAG/ and AIDS/")->capture_default_str();
  app.add_option("--out-dir", out_dir, "Where CSV artifacts are written")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);

  ctx.data_dir = data_dir;
  ctx.jobs = jobs == 0 ? default_jobs() : jobs;

  int failures = 0;
  for (int id : selected) {
    Context c = ctx;
    c.out_dir = fs::path(out_dir) / ("criterion_" + std::to_string(id));
    fs::create_directories(c.out_dir);
    std::string title = "determinism";
    double limit = 0.0;
    std::function<Outcome(const Context&)> body = determinism;
    for (const auto& crit : criteria())
      if (crit.id == id) {
        title = crit.title;
        limit = crit.limit_seconds;
        body = crit.run;
      }
    const auto start = Clock::now();
    Outcome o;
    try {
      o = body(c);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = elapsed(start);
    if (limit > 0 && secs > limit) {
      o.pass = false;
      o.detail += "; exceeded " + fmt("%.0f", limit) + " s limit";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << title << "): " << o.detail
              << " [" << fmt("%.2f", secs) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
