#include "dqlstm/metrics.hpp"

#include <algorithm>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::train {

namespace {

void check(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw ShapeError("predictions (" + std::to_string(predictions.size()) + ") and targets (" +
                     std::to_string(targets.size()) + ") differ in length");
  }
  if (predictions.empty()) throw ShapeError("metrics need at least one sample");
}

}  // namespace

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  check(predictions, targets);
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    sum += e * e;
  }
  return sum / static_cast<double>(predictions.size());
}

double r_squared(std::span<const double> predictions, std::span<const double> targets) {
  check(predictions, targets);
  double mean = 0.0;
  for (double y : targets) mean += y;
  mean /= static_cast<double>(targets.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ss_tot += (targets[i] - mean) * (targets[i] - mean);
    ss_res += (targets[i] - predictions[i]) * (targets[i] - predictions[i]);
  }
  if (!(ss_tot > 0.0)) throw MetricError("R^2 undefined: targets have zero variance");
  return 1.0 - ss_res / ss_tot;
}

std::size_t convergence_epoch(std::span<const double> test_losses) {
  if (test_losses.empty()) return 0;
  const double bound = 1.05 * *std::min_element(test_losses.begin(), test_losses.end());
  // Walk back from the end while the tail stays inside the band.
  std::size_t first = test_losses.size();
  while (first > 0 && test_losses[first - 1] <= bound) --first;
  if (first == test_losses.size()) return 0;
  return first + 1;
}

}  // namespace dqlstm::train
