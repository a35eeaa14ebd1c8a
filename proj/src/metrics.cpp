#include "topokernel/error.hpp"
#include "topokernel/eval.hpp"

namespace topokernel {
namespace {

void check_lengths(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw ArgumentError("metric: " + std::to_string(pred.size()) + " predictions for " +
                        std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) throw ArgumentError("metric: empty input");
}

}  // namespace

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

double f1_score(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && truth[i] == 1) ++tp;
    if (pred[i] == 1 && truth[i] != 1) ++fp;
    if (pred[i] != 1 && truth[i] == 1) ++fn;
  }
  const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace topokernel
