#pragma once

// Trainable sequence models (quantum and classical LSTM plus an affine
// read-out) behind one interface the training loop drives.
//
// Flat parameter layout: cell parameters first, then the read-out weights
// (d_h values) and the read-out bias.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dqlstm/dispatch.hpp"
#include "dqlstm/lstm.hpp"
#include "dqlstm/qlstm.hpp"
#include "dqlstm/vqc.hpp"

namespace dqlstm::train {

/// Full backpropagation through time, or truncated to k earlier steps per loss term.
struct BpttMode {
  int truncation = -1;

  static BpttMode full() { return {}; }
  static BpttMode truncated(int k) { return {k}; }
  bool is_full() const { return truncation < 0; }
};

/// Forward intermediates kept for the backward pass.
struct Trace {
  virtual ~Trace() = default;
  std::vector<qlstm::StepCache> steps;
  std::vector<double> predictions;
};

class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::string label() const = 0;
  virtual int input_dim() const = 0;
  virtual int hidden_dim() const = 0;

  virtual std::size_t num_params() const = 0;
  virtual std::vector<double> params() const = 0;
  virtual void set_params(std::span<const double> values) = 0;

  /// Runs from a zero state and keeps what backward() needs.
  virtual std::unique_ptr<Trace> forward(std::span<const std::vector<double>> inputs) = 0;

  /// dLoss/dparams given dLoss/dprediction at every step. Throws UsageError when
  /// `trace` did not come from this model's forward().
  virtual std::vector<double> backward(const Trace& trace, std::span<const double> dloss_dpred,
                                       BpttMode mode) = 0;

  virtual void set_gradient_mode(vqc::GradientMode) {}
};

struct ReadoutInit {
  static qlstm::Readout random(int hidden_dim, std::mt19937_64& rng);
};

class QlstmModel final : public SequenceModel {
 public:
  QlstmModel(qlstm::QlstmCell cell, qlstm::Readout readout, dispatch::Executor& executor,
             vqc::GradientMode mode = vqc::GradientMode::ParameterShift);

  std::string label() const override;
  int input_dim() const override { return cell_.input_dim(); }
  int hidden_dim() const override { return cell_.hidden_dim(); }
  std::size_t num_params() const override;
  std::vector<double> params() const override;
  void set_params(std::span<const double> values) override;
  std::unique_ptr<Trace> forward(std::span<const std::vector<double>> inputs) override;
  std::vector<double> backward(const Trace& trace, std::span<const double> dloss_dpred, BpttMode mode) override;
  void set_gradient_mode(vqc::GradientMode mode) override { mode_ = mode; }

  const qlstm::QlstmCell& cell() const { return cell_; }
  const qlstm::Readout& readout() const { return readout_; }

 private:
  qlstm::QlstmCell cell_;
  qlstm::Readout readout_;
  dispatch::Executor* executor_;
  vqc::GradientMode mode_;
};

class ClassicalLstmModel final : public SequenceModel {
 public:
  ClassicalLstmModel(ClassicalLstmCell cell, qlstm::Readout readout);

  std::string label() const override { return "Classical LSTM"; }
  int input_dim() const override { return cell_.input_dim; }
  int hidden_dim() const override { return cell_.hidden_dim; }
  std::size_t num_params() const override;
  std::vector<double> params() const override;
  void set_params(std::span<const double> values) override;
  std::unique_ptr<Trace> forward(std::span<const std::vector<double>> inputs) override;
  std::vector<double> backward(const Trace& trace, std::span<const double> dloss_dpred, BpttMode mode) override;

  const ClassicalLstmCell& cell() const { return cell_; }

 private:
  ClassicalLstmCell cell_;
  qlstm::Readout readout_;
};

/// Reverse-mode step through the activations and the state update of one
/// LSTM step: returns dLoss/draw for every gate and dLoss/dc_{t-1}.
void lstm_step_backward(const qlstm::StepCache& step, std::span<const double> d_hidden,
                        std::span<const double> d_cell, qlstm::RawGates& d_raw, std::vector<double>& d_cell_prev);

}  // namespace dqlstm::train
