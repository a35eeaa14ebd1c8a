#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "topokernel/error.hpp"
#include "topokernel/generators.hpp"
#include "topokernel/kernels.hpp"

using namespace topokernel;

namespace {

Matrix random_features(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (double& x : m.data()) x = 4.0 * uniform01(rng) - 2.0;
  return m;
}

std::array<Matrix, 3> split_columns(const Matrix& m) {
  return {m.column(0), m.column(1), m.column(2)};
}

Graph labeled(std::size_t n, double p, std::uint64_t seed) {
  const Graph g = erdos_renyi(n, p, seed);
  std::vector<int> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = static_cast<int>(v % 3);
  const auto e = g.edges();
  return Graph::from_edges(n, e, labels);
}

}  // namespace

TEST_CASE("rbf basics") {
  const std::vector<double> x{0.0, 1.0}, y{1.0, 3.0};
  CHECK(rbf(x, x, 2.0) == 1.0);
  CHECK(rbf(x, y, 0.5) == doctest::Approx(std::exp(-2.5)));
  CHECK(rbf(x, y, 0.0) == 1.0);
  CHECK_THROWS_AS(rbf(x, std::vector<double>{1.0}, 1.0), ArgumentError);
  CHECK_THROWS_AS(rbf(x, y, -1.0), ArgumentError);
  // Larger gamma never increases the kernel.
  double prev = 1.0;
  for (double g : {0.01, 0.1, 1.0, 10.0}) {
    const double k = rbf(x, y, g);
    CHECK(k <= prev);
    prev = k;
  }
}

TEST_CASE("standardization uses population deviation and fits on given rows") {
  Matrix m(4, 2);
  m(0, 0) = 1; m(1, 0) = 3; m(2, 0) = 5; m(3, 0) = 100;
  for (std::size_t r = 0; r < 4; ++r) m(r, 1) = 7.0;
  const std::vector<std::size_t> rows{0, 1, 2};
  const auto stats = fit_standardizer(m, rows);
  CHECK(stats.mean[0] == 3.0);
  CHECK(stats.stddev[0] == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK(stats.stddev[1] == 1.0);  // constant column
  const Matrix z = stats.apply(m);
  CHECK(z(1, 0) == 0.0);
  CHECK(z(0, 1) == 0.0);
}

TEST_CASE("weights validation") {
  CHECK_NOTHROW(LctkWeights({0.2, 0.3, 0.5}));
  CHECK_THROWS_AS(LctkWeights({0.5, 0.6, -0.1}), ArgumentError);
  CHECK_THROWS_AS(LctkWeights({0.5, 0.5, 0.1}), ArgumentError);
  const auto defaults = LctkWeights::search_defaults();
  CHECK(defaults.size() == 7);
  for (const auto& w : defaults) CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rbf gram is symmetric with unit diagonal and job independent") {
  const Matrix f = random_features(30, 3, 1);
  const Matrix k1 = rbf_gram(f, 0.7, 1);
  const Matrix k4 = rbf_gram(f, 0.7, 4);
  CHECK(k1 == k4);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(k1(i, i) == 1.0);
    for (std::size_t j = 0; j < 30; ++j) {
      CHECK(k1(i, j) == k1(j, i));
      CHECK(k1(i, j) == rbf(f.row(i), f.row(j), 0.7));
    }
  }
  CHECK(check_psd(k1, 1e-8 * 30));
  const Matrix block = rbf_block(f, f, 0.7, 3);
  CHECK(block(3, 5) == k1(3, 5));
}

TEST_CASE("gram_single requires one column") {
  CHECK_THROWS_AS(gram_single(random_features(5, 2, 0), Index::Wiener, 1.0), ArgumentError);
}

TEST_CASE("LCTK is a convex combination bounded by its parts") {
  const Matrix f = random_features(25, 3, 2);
  const auto cols = split_columns(f);
  std::array<Matrix, 3> parts;
  for (std::size_t j = 0; j < 3; ++j) parts[j] = rbf_gram(cols[j], 0.5);
  const LctkWeights w({0.5, 0.3, 0.2});
  const Matrix k = gram_lctk(cols, w, {0.5, 0.5, 0.5}).values;
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t j = 0; j < 25; ++j) {
      const double lo = std::min({parts[0](i, j), parts[1](i, j), parts[2](i, j)});
      const double hi = std::max({parts[0](i, j), parts[1](i, j), parts[2](i, j)});
      CHECK(k(i, j) >= lo - 1e-15);
      CHECK(k(i, j) <= hi + 1e-15);
    }
  CHECK(combine_kernels(parts, w) == k);
  CHECK(check_psd(k, 1e-8 * 25));
}

TEST_CASE("LCTK with a single active weight reproduces that kernel bitwise") {
  const Matrix f = random_features(20, 3, 3);
  const auto cols = split_columns(f);
  const auto single = gram_single(cols[0], Index::Wiener, 0.3);
  const auto lctk = gram_lctk(cols, LctkWeights({1.0, 0.0, 0.0}), {0.3, 0.3, 0.3});
  CHECK(single.values == lctk.values);
}

TEST_CASE("permuting the inputs conjugates the gram") {
  const Matrix f = random_features(15, 3, 4);
  Rng rng(9);
  const auto perm = oracle::random_permutation(15, rng);
  std::vector<std::size_t> rows(perm.begin(), perm.end());
  const std::vector<std::size_t> all{0, 1, 2};
  const Matrix k = gram_efv(f, 0.4).values;
  const Matrix kp = gram_efv(f.select(rows, all), 0.4).values;
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) CHECK(kp(i, j) == k(rows[i], rows[j]));
}

TEST_CASE("psd check") {
  Matrix bad(2, 2);
  bad(0, 0) = 1; bad(1, 1) = 1; bad(0, 1) = bad(1, 0) = 2;
  CHECK_FALSE(check_psd(bad, 1e-8));
  CHECK(min_eigenvalue(bad) == doctest::Approx(-1.0));
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(check_psd(bad, 1e-8), ArgumentError);
  CHECK_THROWS_AS(check_psd(Matrix(2, 3), 1e-8), ArgumentError);
}

TEST_CASE("WL subtree kernel") {
  // Two triangles vs a path: iteration 0 only counts labels.
  const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  const std::vector<Edge> pth{{0, 1}, {1, 2}};
  const std::vector<Graph> gs{Graph::from_edges(3, tri), Graph::from_edges(3, pth)};
  const auto k0 = wl_subtree_gram(gs, 0).values;
  CHECK(k0(0, 0) == 9.0);
  CHECK(k0(0, 1) == 9.0);
  const auto k1 = wl_subtree_gram(gs, 1).values;
  CHECK(k1(0, 0) == 18.0);  // 9 + all three nodes share one degree-2 signature
  CHECK(k1(0, 1) == 12.0);  // the path centre looks like a triangle node
  CHECK(k1(1, 1) == 9.0 + 4.0 + 1.0);
  const auto kn = wl_subtree_gram(gs, 1, {true}).values;
  CHECK(kn(0, 0) == doctest::Approx(1.0));
  CHECK(kn(0, 1) == doctest::Approx(12.0 / std::sqrt(18.0 * 14.0)));

  std::vector<Graph> batch;
  for (std::uint64_t s = 0; s < 12; ++s) batch.push_back(labeled(14, 0.25, s));
  const auto gram = wl_subtree_gram(batch, 3, {}, 1);
  CHECK(gram.values == wl_subtree_gram(batch, 3, {}, 4).values);
  CHECK(check_psd(gram, 1e-8 * 12 * gram.values(0, 0)));
  const auto feats = wl_subtree_features(batch, 3);
  CHECK(histogram_dot(feats[2], feats[5]) == gram.values(2, 5));

  // An isomorphic copy is indistinguishable.
  Rng rng(1);
  const Graph h = permute_nodes(batch[0], oracle::random_permutation(14, rng));
  const std::vector<Graph> pair{batch[0], h};
  const auto kp = wl_subtree_gram(pair, 4).values;
  CHECK(kp(0, 0) == kp(0, 1));
  CHECK(kp(1, 1) == kp(0, 1));
}
