#pragma once

#include <cstddef>
#include <span>

namespace dqlstm::train {

/// Mean squared error. Throws ShapeError on length mismatch or empty input.
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

/// 1 - SS_res / SS_tot. Throws MetricError when the targets have zero variance.
double r_squared(std::span<const double> predictions, std::span<const double> targets);

/// First 1-based epoch whose test loss is within 5% of the run minimum and
/// never leaves that band afterwards. 0 when the last epoch is outside the band
/// (or the list is empty).
std::size_t convergence_epoch(std::span<const double> test_losses);

}  // namespace dqlstm::train
