#include "dqlstm/qlstm.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::qlstm {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> even_split(int total, int parts) {
  std::vector<int> out(static_cast<std::size_t>(parts), total / parts);
  for (int i = 0; i < total % parts; ++i) ++out[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace

const char* gate_name(GateId gate) {
  switch (gate) {
    case GateId::Forget:
      return "f";
    case GateId::Input:
      return "i";
    case GateId::Candidate:
      return "C";
    case GateId::Output:
      return "o";
  }
  return "?";
}

PartitionPlan PartitionPlan::even(int input_dim, int hidden_dim, int partitions,
                                  int qubits_per_partition) {
  if (partitions < 1) throw ValidationError("partition count must be >= 1");
  PartitionPlan plan;
  plan.input_splits = even_split(input_dim + hidden_dim, partitions);
  plan.output_splits = even_split(hidden_dim, partitions);
  plan.qubits.assign(static_cast<std::size_t>(partitions), qubits_per_partition);
  return plan;
}

void PartitionPlan::validate(int input_dim, int hidden_dim) const {
  const std::size_t m = input_splits.size();
  if (m == 0) throw ValidationError("partition plan has no partitions");
  if (output_splits.size() != m || qubits.size() != m) {
    throw ValidationError("partition plan lists differ in length");
  }
  const int d = input_dim + hidden_dim;
  if (std::accumulate(input_splits.begin(), input_splits.end(), 0) != d) {
    throw ValidationError("input splits [" + join(input_splits) + "] do not sum to D=" + std::to_string(d));
  }
  if (std::accumulate(output_splits.begin(), output_splits.end(), 0) != hidden_dim) {
    throw ValidationError("output splits [" + join(output_splits) + "] do not sum to d_h=" +
                          std::to_string(hidden_dim));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (input_splits[i] < 1 || output_splits[i] < 1) {
      throw ValidationError("partition " + std::to_string(i) + " has an empty input or output block");
    }
    if (input_splits[i] > qubits[i] || output_splits[i] > qubits[i]) {
      throw ValidationError("partition " + std::to_string(i) + " needs " +
                            std::to_string(std::max(input_splits[i], output_splits[i])) +
                            " qubits but has " + std::to_string(qubits[i]));
    }
  }
}

QlstmState QlstmState::zeros(int hidden_dim) {
  const auto n = static_cast<std::size_t>(hidden_dim);
  return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

QlstmCell::QlstmCell(int input_dim, int hidden_dim, PartitionPlan plan, int depth, bool hadamard_layer)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), depth_(depth), hadamard_(hadamard_layer),
      plan_(std::move(plan)) {
  if (input_dim < 1) throw ValidationError("input_dim must be >= 1");
  if (hidden_dim < 1) throw ValidationError("hidden_dim must be >= 1");
  if (depth < 0) throw ValidationError("depth must be >= 0");
  plan_.validate(input_dim, hidden_dim);

  std::size_t in_off = 0;
  std::size_t out_off = 0;
  for (std::size_t m = 0; m < plan_.num_partitions(); ++m) {
    vqc::VqcConfig cfg{plan_.qubits[m], depth, plan_.input_splits[m], plan_.output_splits[m], hadamard_layer};
    cfg.validate();
    configs_.push_back(cfg);
    input_offsets_.push_back(in_off);
    output_offsets_.push_back(out_off);
    in_off += static_cast<std::size_t>(plan_.input_splits[m]);
    out_off += static_cast<std::size_t>(plan_.output_splits[m]);
  }
  for (auto& bank : banks_) {
    for (const auto& cfg : configs_) bank.emplace_back(cfg.num_params(), 0.0);
  }
}

const vqc::VqcParams& QlstmCell::params(GateId gate, std::size_t m) const {
  return banks_[static_cast<int>(gate)].at(m);
}

vqc::VqcParams& QlstmCell::params(GateId gate, std::size_t m) {
  return banks_[static_cast<int>(gate)].at(m);
}

void QlstmCell::init_params(std::mt19937_64& rng) {
  for (auto& bank : banks_) {
    for (std::size_t m = 0; m < bank.size(); ++m) bank[m] = vqc::init_params(configs_[m], rng);
  }
}

std::size_t QlstmCell::num_params() const {
  std::size_t n = 0;
  for (const auto& cfg : configs_) n += cfg.num_params();
  return 4 * n;
}

std::size_t QlstmCell::flat_offset(GateId gate, std::size_t m) const {
  std::size_t per_gate = num_params() / 4;
  std::size_t off = static_cast<std::size_t>(gate) * per_gate;
  for (std::size_t k = 0; k < m; ++k) off += configs_[k].num_params();
  return off;
}

std::vector<double> QlstmCell::flat_params() const {
  std::vector<double> out;
  out.reserve(num_params());
  for (const auto& bank : banks_) {
    for (const auto& p : bank) out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void QlstmCell::set_flat_params(std::span<const double> values) {
  if (values.size() != num_params()) {
    throw ShapeError("expected " + std::to_string(num_params()) + " cell parameters, got " +
                     std::to_string(values.size()));
  }
  std::size_t off = 0;
  for (auto& bank : banks_) {
    for (auto& p : bank) {
      std::copy(values.begin() + static_cast<std::ptrdiff_t>(off),
                values.begin() + static_cast<std::ptrdiff_t>(off + p.size()), p.begin());
      off += p.size();
    }
  }
}

std::vector<double> concat_input(std::span<const double> h_prev, std::span<const double> x) {
  if (h_prev.empty()) throw ShapeError("hidden state must have d_h >= 1 entries");
  if (x.empty()) throw ShapeError("input must have d_x >= 1 entries");
  std::vector<double> v(h_prev.begin(), h_prev.end());
  v.insert(v.end(), x.begin(), x.end());
  return v;
}

std::vector<std::vector<double>> partition_input(std::span<const double> v, const PartitionPlan& plan) {
  const int total = std::accumulate(plan.input_splits.begin(), plan.input_splits.end(), 0);
  if (static_cast<std::size_t>(total) != v.size()) {
    throw ShapeError("input splits sum to " + std::to_string(total) + " but v has " +
                     std::to_string(v.size()) + " entries");
  }
  std::vector<std::vector<double>> parts;
  std::size_t off = 0;
  for (int d : plan.input_splits) {
    if (d < 0) throw ShapeError("negative split");
    const auto n = static_cast<std::size_t>(d);
    parts.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(off),
                       v.begin() + static_cast<std::ptrdiff_t>(off + n));
    off += n;
  }
  return parts;
}

std::vector<dispatch::JobRequest> gate_jobs(GateId gate, const QlstmCell& cell, std::span<const double> v,
                                            dispatch::JobKind kind, std::uint64_t first_id) {
  if (v.size() != static_cast<std::size_t>(cell.concat_dim())) {
    throw ShapeError("v has " + std::to_string(v.size()) + " entries, cell expects " +
                     std::to_string(cell.concat_dim()));
  }
  auto parts = partition_input(v, cell.plan());
  std::vector<dispatch::JobRequest> jobs;
  jobs.reserve(parts.size());
  for (std::size_t m = 0; m < parts.size(); ++m) {
    jobs.push_back({first_id + m, kind, cell.config(m), cell.params(gate, m), std::move(parts[m])});
  }
  return jobs;
}

namespace {

// Copies partition results into a gate vector, throwing on the first failure.
void gather(const QlstmCell& cell, std::span<const dispatch::JobResult> results, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(cell.hidden_dim()), 0.0);
  for (std::size_t m = 0; m < results.size(); ++m) {
    const auto& r = results[m];
    if (!r.ok) {
      throw JobFailure("partition " + std::to_string(m) + " failed: " + r.message, static_cast<int>(m));
    }
    const auto expected = static_cast<std::size_t>(cell.config(m).output_dim);
    if (r.payload.data().size() != expected) {
      throw JobFailure("partition " + std::to_string(m) + " returned a payload of the wrong size",
                       static_cast<int>(m));
    }
    std::copy(r.payload.data().begin(), r.payload.data().end(),
              out.begin() + static_cast<std::ptrdiff_t>(cell.output_offset(m)));
  }
}

}  // namespace

std::vector<double> gate_forward(GateId gate, const QlstmCell& cell, std::span<const double> v,
                                 dispatch::Executor& executor) {
  const auto jobs = gate_jobs(gate, cell, v, dispatch::JobKind::Evaluate);
  const auto results = executor.submit_batch(jobs);
  std::vector<double> raw;
  gather(cell, results, raw);
  return raw;
}

StepCache apply_gates(const RawGates& raw, const QlstmState& prev) {
  const std::size_t n = prev.cell.size();
  for (GateId g : kGates) {
    if (raw[g].size() != n) throw ShapeError(std::string("raw gate ") + gate_name(g) + " has wrong length");
  }
  if (prev.hidden.size() != n) throw ShapeError("hidden and cell state lengths differ");

  StepCache s;
  s.cell_prev = prev.cell;
  s.raw = raw;
  s.forget.resize(n);
  s.input.resize(n);
  s.candidate.resize(n);
  s.output.resize(n);
  s.cell.resize(n);
  s.tanh_cell.resize(n);
  s.hidden.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.forget[k] = sigmoid(raw[GateId::Forget][k]);
    s.input[k] = sigmoid(raw[GateId::Input][k]);
    s.candidate[k] = std::tanh(raw[GateId::Candidate][k]);
    s.output[k] = sigmoid(raw[GateId::Output][k]);
    s.cell[k] = s.forget[k] * prev.cell[k] + s.input[k] * s.candidate[k];
    s.tanh_cell[k] = std::tanh(s.cell[k]);
    s.hidden[k] = s.output[k] * s.tanh_cell[k];
  }
  return s;
}

StepCache cell_step(const QlstmCell& cell, std::span<const double> x, const QlstmState& prev,
                    dispatch::Executor& executor) {
  const auto d_h = static_cast<std::size_t>(cell.hidden_dim());
  if (prev.hidden.size() != d_h || prev.cell.size() != d_h) {
    throw ShapeError("state has wrong dimension for cell with d_h=" + std::to_string(d_h));
  }
  if (x.size() != static_cast<std::size_t>(cell.input_dim())) {
    throw ShapeError("x_t has " + std::to_string(x.size()) + " entries, cell expects " +
                     std::to_string(cell.input_dim()));
  }
  auto v = concat_input(prev.hidden, x);
  const std::size_t m = cell.num_partitions();

  std::vector<dispatch::JobRequest> jobs;
  jobs.reserve(4 * m);
  for (GateId g : kGates) {
    auto part = gate_jobs(g, cell, v, dispatch::JobKind::Evaluate, jobs.size());
    jobs.insert(jobs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const auto results = executor.submit_batch(jobs);

  RawGates raw;
  for (GateId g : kGates) {
    const std::span<const dispatch::JobResult> slice(results.data() + static_cast<int>(g) * m, m);
    gather(cell, slice, raw[g]);
  }
  StepCache s = apply_gates(raw, prev);
  s.v = std::move(v);
  return s;
}

double Readout::predict(std::span<const double> hidden) const {
  if (hidden.size() != weights.size()) throw ShapeError("read-out weight count does not match d_h");
  double y = bias;
  for (std::size_t k = 0; k < hidden.size(); ++k) y += weights[k] * hidden[k];
  return y;
}

SequenceTrace sequence_forward(const QlstmCell& cell, const Readout& readout,
                               std::span<const std::vector<double>> inputs, const QlstmState& initial,
                               dispatch::Executor& executor) {
  if (inputs.empty()) throw UsageError("sequence_forward needs at least one timestep");
  SequenceTrace trace;
  trace.steps.reserve(inputs.size());
  trace.predictions.reserve(inputs.size());
  QlstmState state = initial;
  for (const auto& x : inputs) {
    trace.steps.push_back(cell_step(cell, x, state, executor));
    const StepCache& s = trace.steps.back();
    trace.predictions.push_back(readout.predict(s.hidden));
    state = s.state();
  }
  return trace;
}

ResourceEstimate estimate_resources(int input_dim, int hidden_dim, int partitions, int depth, int qubits,
                                    int n_extra) {
  if (input_dim < 1 || hidden_dim < 1 || partitions < 1 || depth < 0 || qubits < 1 || n_extra < 0) {
    throw ValidationError("resource estimate needs positive dimensions and n_extra >= 0");
  }
  ResourceEstimate r;
  r.p_vqc = 2LL * qubits * depth;
  r.p_gates = 4LL * partitions * r.p_vqc;
  r.p_total = (4LL + n_extra) * partitions * r.p_vqc;
  r.total_qubits = static_cast<long long>(partitions) * qubits;
  r.per_qpu_qubits = qubits;
  r.n_extra = n_extra;
  return r;
}

}  // namespace dqlstm::qlstm
