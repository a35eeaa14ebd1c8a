#include <cmath>

#include "topokernel/error.hpp"
#include "topokernel/eval.hpp"
#include "topokernel/rng.hpp"

namespace topokernel {

std::vector<std::size_t> FoldPlan::scored_folds() const {
  if (holdout) return {1};
  std::vector<std::size_t> out(k);
  for (std::size_t f = 0; f < k; ++f) out[f] = f;
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

namespace {

// Per-class index lists, each shuffled, -1 class first.
std::vector<std::vector<std::size_t>> shuffled_classes(std::span<const int> labels,
                                                       std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> classes(2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == -1) {
      classes[0].push_back(i);
    } else if (labels[i] == 1) {
      classes[1].push_back(i);
    } else {
      throw ArgumentError("labels must be -1 or +1");
    }
  }
  Rng rng(seed);
  for (auto& c : classes) shuffle(c, rng);
  return classes;
}

}  // namespace

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("stratified_kfold: k must be at least 2");
  const auto classes = shuffled_classes(labels, seed);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (!classes[c].empty() && classes[c].size() < k) {
      throw StratificationError("class " + std::string(c == 0 ? "-1" : "+1") + " has " +
                                std::to_string(classes[c].size()) + " members, fewer than k = " +
                                std::to_string(k));
    }
  }
  FoldPlan plan{k, std::vector<std::size_t>(labels.size()), seed};
  std::size_t position = 0;
  for (const auto& members : classes) {
    for (std::size_t i : members) plan.assignments[i] = position++ % k;
  }
  return plan;
}

FoldPlan stratified_holdout(std::span<const int> labels, double test_fraction,
                            std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ArgumentError("holdout test fraction must lie in (0, 1)");
  }
  const auto classes = shuffled_classes(labels, seed);
  FoldPlan plan{2, std::vector<std::size_t>(labels.size(), 0), seed, true};
  for (const auto& members : classes) {
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(members.size())));
    for (std::size_t r = 0; r < n_test && r < members.size(); ++r) plan.assignments[members[r]] = 1;
  }
  return plan;
}

}  // namespace topokernel
