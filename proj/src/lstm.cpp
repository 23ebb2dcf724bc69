#include "dqlstm/lstm.hpp"

#include <cmath>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::train {

ClassicalLstmCell::ClassicalLstmCell(int in, int hidden) : input_dim(in), hidden_dim(hidden) {
  if (in < 1 || hidden < 1) throw ValidationError("LSTM dimensions must be >= 1");
  const auto rows = static_cast<std::size_t>(hidden);
  const auto cols = static_cast<std::size_t>(in + hidden);
  for (auto& w : weights) w = Matrix(rows, cols);
  for (auto& b : biases) b.assign(rows, 0.0);
}

void ClassicalLstmCell::init_params(std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& w : weights) {
    for (double& x : w.data()) x = dist(rng);
  }
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

std::size_t ClassicalLstmCell::num_params() const {
  const auto h = static_cast<std::size_t>(hidden_dim);
  return 4 * h * static_cast<std::size_t>(input_dim + hidden_dim) + 4 * h;
}

std::vector<double> ClassicalLstmCell::flat_params() const {
  std::vector<double> out;
  out.reserve(num_params());
  for (const auto& w : weights) out.insert(out.end(), w.data().begin(), w.data().end());
  for (const auto& b : biases) out.insert(out.end(), b.begin(), b.end());
  return out;
}

void ClassicalLstmCell::set_flat_params(std::span<const double> values) {
  if (values.size() != num_params()) {
    throw ShapeError("expected " + std::to_string(num_params()) + " LSTM parameters, got " +
                     std::to_string(values.size()));
  }
  auto it = values.begin();
  for (auto& w : weights) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(w.data().size()), w.data().begin());
    it += static_cast<std::ptrdiff_t>(w.data().size());
  }
  for (auto& b : biases) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(b.size()), b.begin());
    it += static_cast<std::ptrdiff_t>(b.size());
  }
}

qlstm::StepCache classical_lstm_step(const ClassicalLstmCell& cell, std::span<const double> x,
                                     const qlstm::QlstmState& state) {
  const auto h = static_cast<std::size_t>(cell.hidden_dim);
  if (x.size() != static_cast<std::size_t>(cell.input_dim)) throw ShapeError("x_t has the wrong dimension");
  if (state.hidden.size() != h || state.cell.size() != h) throw ShapeError("state has the wrong dimension");
  auto v = qlstm::concat_input(state.hidden, x);
  qlstm::RawGates raw;
  for (qlstm::GateId g : qlstm::kGates) {
    const auto gi = static_cast<std::size_t>(g);
    auto& out = raw[g];
    out.assign(h, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
      double acc = cell.biases[gi][r];
      const auto row = cell.weights[gi].row(r);
      for (std::size_t c = 0; c < v.size(); ++c) acc += row[c] * v[c];
      out[r] = acc;
    }
  }
  auto s = qlstm::apply_gates(raw, state);
  s.v = std::move(v);
  return s;
}

}  // namespace dqlstm::train
