#pragma once

// Hybrid training loop. Windows of a dataset are cut, in time order, into
// sequences of `sequence_length` consecutive windows; each sequence starts
// from a zero state and is scored at every step.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dqlstm/metrics.hpp"
#include "dqlstm/model.hpp"
#include "dqlstm/optim.hpp"
#include "dqlstm/tasks.hpp"

namespace dqlstm::train {

struct Sequence {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
};

std::vector<Sequence> make_sequences(std::span<const tasks::Window> windows, std::size_t sequence_length);

struct TrainingConfig {
  int epochs = 100;
  OptimizerConfig optimizer;
  std::size_t batch_size = 0;  ///< sequences per update; 0 means full batch
  std::size_t sequence_length = 8;
  vqc::GradientMode gradient_mode = vqc::GradientMode::ParameterShift;
  BpttMode bptt = BpttMode::full();
  bool shuffle = true;  ///< reorder sequences each epoch in mini-batch mode
  std::uint64_t seed = 0;

  void validate() const;
};

struct MetricsRecord {
  std::vector<double> train_loss;
  std::vector<double> test_loss;
  double r2 = 0.0;
  std::size_t convergence_epoch = 0;
  std::vector<double> test_predictions;  ///< normalized units, one per test window
  std::vector<double> test_targets;
};

struct BatchGradient {
  double loss = 0.0;
  std::vector<double> grads;
};

/// MSE over every prediction in `batch` and its gradient with respect to all
/// model parameters.
BatchGradient bptt_gradients(SequenceModel& model, std::span<const Sequence> batch, BpttMode mode);

/// Predictions for every step of every sequence, concatenated.
std::vector<double> predict(SequenceModel& model, std::span<const Sequence> sequences);
std::vector<double> targets_of(std::span<const Sequence> sequences);

using EpochCallback = std::function<void(int epoch, double train_loss, double test_loss)>;

/// Trains in place. Throws DivergenceError naming the epoch on a non-finite loss.
MetricsRecord train_loop(SequenceModel& model, const tasks::TimeSeriesDataset& dataset,
                         const TrainingConfig& config, const EpochCallback& on_epoch = {});

}  // namespace dqlstm::train
