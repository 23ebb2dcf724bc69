#include "dqlstm/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::train {

std::vector<Sequence> make_sequences(std::span<const tasks::Window> windows, std::size_t sequence_length) {
  if (sequence_length < 1) throw UsageError("sequence length must be >= 1");
  std::vector<Sequence> out;
  for (std::size_t start = 0; start < windows.size(); start += sequence_length) {
    Sequence s;
    const std::size_t end = std::min(windows.size(), start + sequence_length);
    for (std::size_t i = start; i < end; ++i) {
      s.inputs.push_back(windows[i].inputs);
      s.targets.push_back(windows[i].target);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void TrainingConfig::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (sequence_length < 1) throw ValidationError("sequence length must be >= 1");
  if (!bptt.is_full() && bptt.truncation < 0) throw ValidationError("truncation depth must be >= 0");
  optimizer.validate();
}

BatchGradient bptt_gradients(SequenceModel& model, std::span<const Sequence> batch, BpttMode mode) {
  if (batch.empty()) throw UsageError("gradient batch is empty");
  std::size_t count = 0;
  for (const auto& s : batch) count += s.targets.size();
  if (count == 0) throw UsageError("gradient batch has no targets");

  BatchGradient out;
  out.grads.assign(model.num_params(), 0.0);
  for (const auto& s : batch) {
    if (s.inputs.size() != s.targets.size()) throw ShapeError("sequence inputs and targets differ in length");
    const auto trace = model.forward(s.inputs);
    std::vector<double> dpred(s.targets.size());
    for (std::size_t t = 0; t < dpred.size(); ++t) {
      const double e = trace->predictions[t] - s.targets[t];
      out.loss += e * e;
      dpred[t] = 2.0 * e / static_cast<double>(count);
    }
    const auto g = model.backward(*trace, dpred, mode);
    for (std::size_t i = 0; i < g.size(); ++i) out.grads[i] += g[i];
  }
  out.loss /= static_cast<double>(count);
  return out;
}

std::vector<double> predict(SequenceModel& model, std::span<const Sequence> sequences) {
  std::vector<double> out;
  for (const auto& s : sequences) {
    const auto trace = model.forward(s.inputs);
    out.insert(out.end(), trace->predictions.begin(), trace->predictions.end());
  }
  return out;
}

std::vector<double> targets_of(std::span<const Sequence> sequences) {
  std::vector<double> out;
  for (const auto& s : sequences) out.insert(out.end(), s.targets.begin(), s.targets.end());
  return out;
}

MetricsRecord train_loop(SequenceModel& model, const tasks::TimeSeriesDataset& dataset,
                         const TrainingConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.train().empty() || dataset.test().empty()) {
    throw UsageError("dataset needs both training and test windows");
  }
  if (dataset.window != static_cast<std::size_t>(model.input_dim())) {
    throw ValidationError("dataset window " + std::to_string(dataset.window) + " does not match model input_dim " +
                          std::to_string(model.input_dim()));
  }
  model.set_gradient_mode(config.gradient_mode);

  const auto train_seqs = make_sequences(dataset.train(), config.sequence_length);
  const auto test_seqs = make_sequences(dataset.test(), config.sequence_length);
  const auto train_targets = targets_of(train_seqs);
  const auto test_targets = targets_of(test_seqs);

  Optimizer optimizer(config.optimizer);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_seqs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch_size = config.batch_size == 0 ? train_seqs.size() : config.batch_size;

  MetricsRecord record;
  std::vector<double> params = model.params();
  std::vector<double> test_pred;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle && batch_size < train_seqs.size()) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<Sequence> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) {
        batch.push_back(train_seqs[order[i]]);
      }
      const auto g = bptt_gradients(model, batch, config.bptt);
      if (!std::isfinite(g.loss)) {
        throw DivergenceError("non-finite training loss in epoch " + std::to_string(epoch), epoch);
      }
      optimizer.step(params, g.grads);
      model.set_params(params);
    }
    const double train_loss = mse_loss(predict(model, train_seqs), train_targets);
    test_pred = predict(model, test_seqs);
    const double test_loss = mse_loss(test_pred, test_targets);
    if (!std::isfinite(train_loss) || !std::isfinite(test_loss)) {
      throw DivergenceError("non-finite loss after epoch " + std::to_string(epoch), epoch);
    }
    record.train_loss.push_back(train_loss);
    record.test_loss.push_back(test_loss);
    if (on_epoch) on_epoch(epoch, train_loss, test_loss);
  }
  record.test_predictions = std::move(test_pred);
  record.test_targets = test_targets;
  record.r2 = r_squared(record.test_predictions, record.test_targets);
  record.convergence_epoch = convergence_epoch(record.test_loss);
  return record;
}

}  // namespace dqlstm::train
