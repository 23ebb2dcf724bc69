#pragma once

// Classical LSTM cell used as the baseline. Shares StepCache and the
// activation/state update with the quantum cell.

#include <array>
#include <random>
#include <span>
#include <vector>

#include "dqlstm/matrix.hpp"
#include "dqlstm/qlstm.hpp"

namespace dqlstm::train {

struct ClassicalLstmCell {
  int input_dim = 1;
  int hidden_dim = 1;
  std::array<Matrix, 4> weights;  ///< d_h x (d_h + d_x), indexed by GateId, acting on [h; x]
  std::array<std::vector<double>, 4> biases;

  ClassicalLstmCell() = default;
  ClassicalLstmCell(int input_dim, int hidden_dim);

  /// Uniform in [-1/sqrt(d_h), 1/sqrt(d_h)], zero biases.
  void init_params(std::mt19937_64& rng);

  std::size_t num_params() const;
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> values);
};

qlstm::StepCache classical_lstm_step(const ClassicalLstmCell& cell, std::span<const double> x,
                                     const qlstm::QlstmState& state);

}  // namespace dqlstm::train
