#include "dqlstm/model.hpp"

#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::train {

using qlstm::GateId;
using qlstm::kGates;

qlstm::Readout ReadoutInit::random(int hidden_dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  qlstm::Readout r;
  r.weights.resize(static_cast<std::size_t>(hidden_dim));
  for (double& w : r.weights) w = dist(rng);
  r.bias = 0.0;
  return r;
}

void lstm_step_backward(const qlstm::StepCache& s, std::span<const double> d_hidden,
                        std::span<const double> d_cell, qlstm::RawGates& d_raw, std::vector<double>& d_cell_prev) {
  const std::size_t n = s.hidden.size();
  for (GateId g : kGates) d_raw[g].assign(n, 0.0);
  d_cell_prev.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = s.forget[k];
    const double i = s.input[k];
    const double g = s.candidate[k];
    const double o = s.output[k];
    const double tc = s.tanh_cell[k];
    const double dc = d_hidden[k] * o * (1.0 - tc * tc) + d_cell[k];
    d_raw[GateId::Output][k] = d_hidden[k] * tc * o * (1.0 - o);
    d_raw[GateId::Forget][k] = dc * s.cell_prev[k] * f * (1.0 - f);
    d_raw[GateId::Input][k] = dc * g * i * (1.0 - i);
    d_raw[GateId::Candidate][k] = dc * i * (1.0 - g * g);
    d_cell_prev[k] = dc * f;
  }
}

namespace {

// Shared reverse sweep. `propagate(t, d_raw)` accumulates cell parameter
// gradients for step t and returns dLoss/dv_t.
template <typename Propagate>
void reverse_sweep(const Trace& trace, const qlstm::Readout& readout, std::span<const double> dpred,
                   BpttMode mode, std::span<double> readout_grads, Propagate&& propagate) {
  const std::size_t steps = trace.steps.size();
  if (dpred.size() != steps) throw ShapeError("one loss gradient per step required");
  const std::size_t n = readout.weights.size();

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < n; ++k) readout_grads[k] += dpred[t] * trace.steps[t].hidden[k];
    readout_grads[n] += dpred[t];
  }

  qlstm::RawGates d_raw;
  std::vector<double> d_cell_prev;
  std::vector<double> dh(n);
  std::vector<double> dc(n);

  if (mode.is_full()) {
    std::vector<double> dh_next(n, 0.0);
    std::vector<double> dc_next(n, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
      for (std::size_t k = 0; k < n; ++k) dh[k] = readout.weights[k] * dpred[t] + dh_next[k];
      lstm_step_backward(trace.steps[t], dh, dc_next, d_raw, d_cell_prev);
      const std::vector<double> dv = propagate(t, d_raw);
      std::copy(dv.begin(), dv.begin() + static_cast<std::ptrdiff_t>(n), dh_next.begin());
      dc_next = d_cell_prev;
    }
    return;
  }

  const auto k_max = static_cast<std::size_t>(mode.truncation);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < n; ++k) dh[k] = readout.weights[k] * dpred[t];
    std::fill(dc.begin(), dc.end(), 0.0);
    for (std::size_t s = t;; --s) {
      lstm_step_backward(trace.steps[s], dh, dc, d_raw, d_cell_prev);
      const std::vector<double> dv = propagate(s, d_raw);
      if (s == 0 || t - s == k_max) break;
      std::copy(dv.begin(), dv.begin() + static_cast<std::ptrdiff_t>(n), dh.begin());
      dc = d_cell_prev;
    }
  }
}

struct QlstmTrace final : Trace {
  const void* owner = nullptr;
};

struct ClassicalTrace final : Trace {
  const void* owner = nullptr;
};

std::vector<double> readout_params(const qlstm::Readout& r) {
  std::vector<double> out = r.weights;
  out.push_back(r.bias);
  return out;
}

void set_readout(qlstm::Readout& r, std::span<const double> values) {
  std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(r.weights.size()), r.weights.begin());
  r.bias = values[r.weights.size()];
}

}  // namespace

// QlstmModel -------------------------------------------------------------------

QlstmModel::QlstmModel(qlstm::QlstmCell cell, qlstm::Readout readout, dispatch::Executor& executor,
                       vqc::GradientMode mode)
    : cell_(std::move(cell)), readout_(std::move(readout)), executor_(&executor), mode_(mode) {
  if (readout_.weights.size() != static_cast<std::size_t>(cell_.hidden_dim())) {
    throw ShapeError("read-out weight count does not match d_h");
  }
}

std::string QlstmModel::label() const {
  const auto& plan = cell_.plan();
  if (plan.num_partitions() == 1) return "Centric QLSTM (" + std::to_string(plan.qubits[0]) + " qubit)";
  bool uniform = true;
  int total = 0;
  for (int q : plan.qubits) {
    uniform = uniform && q == plan.qubits[0];
    total += q;
  }
  if (uniform) {
    return "Distributed QLSTM (" + std::to_string(plan.num_partitions()) + "x" + std::to_string(plan.qubits[0]) +
           " qubit)";
  }
  return "Distributed QLSTM (" + std::to_string(total) + " qubit)";
}

std::size_t QlstmModel::num_params() const { return cell_.num_params() + readout_.weights.size() + 1; }

std::vector<double> QlstmModel::params() const {
  auto out = cell_.flat_params();
  const auto r = readout_params(readout_);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

void QlstmModel::set_params(std::span<const double> values) {
  if (values.size() != num_params()) throw ShapeError("wrong parameter count for QLSTM model");
  cell_.set_flat_params(values.first(cell_.num_params()));
  set_readout(readout_, values.subspan(cell_.num_params()));
}

std::unique_ptr<Trace> QlstmModel::forward(std::span<const std::vector<double>> inputs) {
  auto seq = qlstm::sequence_forward(cell_, readout_, inputs, qlstm::QlstmState::zeros(cell_.hidden_dim()),
                                     *executor_);
  auto trace = std::make_unique<QlstmTrace>();
  trace->owner = this;
  trace->steps = std::move(seq.steps);
  trace->predictions = std::move(seq.predictions);
  return trace;
}

std::vector<double> QlstmModel::backward(const Trace& base, std::span<const double> dpred, BpttMode mode) {
  const auto* trace = dynamic_cast<const QlstmTrace*>(&base);
  if (trace == nullptr || trace->owner != this) throw UsageError("backward needs a trace from this model's forward");
  const std::size_t steps = trace->steps.size();
  const std::size_t parts = cell_.num_partitions();

  // Jacobians for every (step, gate, partition): [param, input] pairs.
  const auto slot = [&](std::size_t t, GateId g, std::size_t m) {
    return ((t * 4 + static_cast<std::size_t>(g)) * parts + m) * 2;
  };
  std::vector<Matrix> jac(steps * 4 * parts * 2);
  if (mode_ == vqc::GradientMode::ParameterShift) {
    std::vector<dispatch::JobRequest> jobs;
    jobs.reserve(jac.size());
    for (std::size_t t = 0; t < steps; ++t) {
      for (GateId g : kGates) {
        auto pjobs = qlstm::gate_jobs(g, cell_, trace->steps[t].v, dispatch::JobKind::ParamShiftGradient);
        auto xjobs = qlstm::gate_jobs(g, cell_, trace->steps[t].v, dispatch::JobKind::InputJacobian);
        for (std::size_t m = 0; m < parts; ++m) {
          pjobs[m].job_id = slot(t, g, m);
          xjobs[m].job_id = slot(t, g, m) + 1;
          jobs.push_back(std::move(pjobs[m]));
          jobs.push_back(std::move(xjobs[m]));
        }
      }
    }
    auto results = executor_->submit_batch(jobs);
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (!results[j].ok) {
        const int m = static_cast<int>((j / 2) % parts);
        throw JobFailure("gradient job for partition " + std::to_string(m) + " failed: " + results[j].message, m);
      }
      jac[j] = std::move(results[j].payload);
    }
  } else {
    for (std::size_t t = 0; t < steps; ++t) {
      const auto split = qlstm::partition_input(trace->steps[t].v, cell_.plan());
      for (GateId g : kGates) {
        for (std::size_t m = 0; m < parts; ++m) {
          const auto& cfg = cell_.config(m);
          jac[slot(t, g, m)] = vqc::finite_difference_gradient(cfg, cell_.params(g, m), split[m]);
          jac[slot(t, g, m) + 1] = vqc::finite_difference_input_jacobian(cfg, cell_.params(g, m), split[m]);
        }
      }
    }
  }

  std::vector<double> grads(num_params(), 0.0);
  const std::span<double> readout_grads = std::span(grads).subspan(cell_.num_params());
  const auto d_concat = static_cast<std::size_t>(cell_.concat_dim());

  reverse_sweep(*trace, readout_, dpred, mode, readout_grads, [&](std::size_t t, const qlstm::RawGates& d_raw) {
    std::vector<double> dv(d_concat, 0.0);
    for (GateId g : kGates) {
      for (std::size_t m = 0; m < parts; ++m) {
        const Matrix& jp = jac[slot(t, g, m)];
        const Matrix& jx = jac[slot(t, g, m) + 1];
        const std::size_t out_off = cell_.output_offset(m);
        const std::size_t in_off = cell_.input_offset(m);
        const std::size_t p_off = cell_.flat_offset(g, m);
        for (std::size_t k = 0; k < jp.rows(); ++k) {
          const double upstream = d_raw[g][out_off + k];
          if (upstream == 0.0) continue;
          const auto prow = jp.row(k);
          for (std::size_t p = 0; p < prow.size(); ++p) grads[p_off + p] += upstream * prow[p];
          const auto xrow = jx.row(k);
          for (std::size_t j = 0; j < xrow.size(); ++j) dv[in_off + j] += upstream * xrow[j];
        }
      }
    }
    return dv;
  });
  return grads;
}

// ClassicalLstmModel -----------------------------------------------------------

ClassicalLstmModel::ClassicalLstmModel(ClassicalLstmCell cell, qlstm::Readout readout)
    : cell_(std::move(cell)), readout_(std::move(readout)) {
  if (readout_.weights.size() != static_cast<std::size_t>(cell_.hidden_dim)) {
    throw ShapeError("read-out weight count does not match d_h");
  }
}

std::size_t ClassicalLstmModel::num_params() const { return cell_.num_params() + readout_.weights.size() + 1; }

std::vector<double> ClassicalLstmModel::params() const {
  auto out = cell_.flat_params();
  const auto r = readout_params(readout_);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

void ClassicalLstmModel::set_params(std::span<const double> values) {
  if (values.size() != num_params()) throw ShapeError("wrong parameter count for LSTM model");
  cell_.set_flat_params(values.first(cell_.num_params()));
  set_readout(readout_, values.subspan(cell_.num_params()));
}

std::unique_ptr<Trace> ClassicalLstmModel::forward(std::span<const std::vector<double>> inputs) {
  if (inputs.empty()) throw UsageError("forward needs at least one timestep");
  auto trace = std::make_unique<ClassicalTrace>();
  trace->owner = this;
  auto state = qlstm::QlstmState::zeros(cell_.hidden_dim);
  for (const auto& x : inputs) {
    trace->steps.push_back(classical_lstm_step(cell_, x, state));
    trace->predictions.push_back(readout_.predict(trace->steps.back().hidden));
    state = trace->steps.back().state();
  }
  return trace;
}

std::vector<double> ClassicalLstmModel::backward(const Trace& base, std::span<const double> dpred, BpttMode mode) {
  const auto* trace = dynamic_cast<const ClassicalTrace*>(&base);
  if (trace == nullptr || trace->owner != this) throw UsageError("backward needs a trace from this model's forward");
  std::vector<double> grads(num_params(), 0.0);
  const std::span<double> readout_grads = std::span(grads).subspan(cell_.num_params());
  const auto h = static_cast<std::size_t>(cell_.hidden_dim);
  const auto d = static_cast<std::size_t>(cell_.hidden_dim + cell_.input_dim);
  const std::size_t weight_block = h * d;
  const std::size_t bias_base = 4 * weight_block;

  reverse_sweep(*trace, readout_, dpred, mode, readout_grads, [&](std::size_t t, const qlstm::RawGates& d_raw) {
    const auto& v = trace->steps[t].v;
    std::vector<double> dv(d, 0.0);
    for (GateId g : kGates) {
      const auto gi = static_cast<std::size_t>(g);
      const Matrix& w = cell_.weights[gi];
      for (std::size_t r = 0; r < h; ++r) {
        const double upstream = d_raw[g][r];
        double* gw = grads.data() + gi * weight_block + r * d;
        for (std::size_t c = 0; c < d; ++c) {
          gw[c] += upstream * v[c];
          dv[c] += upstream * w(r, c);
        }
        grads[bias_base + gi * h + r] += upstream;
      }
    }
    return dv;
  });
  return grads;
}

}  // namespace dqlstm::train
