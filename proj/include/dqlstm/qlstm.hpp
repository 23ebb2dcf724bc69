#pragma once

// QLSTM cell with VQC-backed gates, in centric (one partition) or distributed
// (M partitions) form.
//
// Per step, with v = [h_{t-1}; x_t] split into M contiguous blocks:
//   raw_g = [VQC_g^(1)(v^(1)), ..., VQC_g^(M)(v^(M))]   for g in {f, i, C, o}
//   f = sigma(raw_f), i = sigma(raw_i), C~ = tanh(raw_C), o = sigma(raw_o)
//   c_t = f * c_{t-1} + i * C~,  h_t = o * tanh(c_t)
// Raw outputs are Pauli-Z expectations, so f, i, o stay inside
// (sigma(-1), sigma(1)) ~ (0.269, 0.731).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dqlstm/dispatch.hpp"
#include "dqlstm/vqc.hpp"

namespace dqlstm::qlstm {

enum class GateId { Forget = 0, Input = 1, Candidate = 2, Output = 3 };
inline constexpr std::array<GateId, 4> kGates = {GateId::Forget, GateId::Input, GateId::Candidate,
                                                 GateId::Output};
const char* gate_name(GateId gate);

struct PartitionPlan {
  std::vector<int> input_splits;   ///< D_m, summing to d_x + d_h
  std::vector<int> output_splits;  ///< d_h^(m), summing to d_h
  std::vector<int> qubits;         ///< q_m

  std::size_t num_partitions() const { return input_splits.size(); }

  /// Splits D and d_h as evenly as possible (earlier partitions take the
  /// remainder) with `qubits_per_partition` qubits each.
  static PartitionPlan even(int input_dim, int hidden_dim, int partitions, int qubits_per_partition);

  /// Throws ValidationError unless the sums match and every block fits its register.
  void validate(int input_dim, int hidden_dim) const;

  bool operator==(const PartitionPlan&) const = default;
};

struct QlstmState {
  std::vector<double> hidden;
  std::vector<double> cell;

  static QlstmState zeros(int hidden_dim);
};

class QlstmCell {
 public:
  QlstmCell(int input_dim, int hidden_dim, PartitionPlan plan, int depth, bool hadamard_layer = true);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  int concat_dim() const { return input_dim_ + hidden_dim_; }
  int depth() const { return depth_; }
  bool hadamard_layer() const { return hadamard_; }
  const PartitionPlan& plan() const { return plan_; }
  std::size_t num_partitions() const { return plan_.num_partitions(); }

  /// Circuit config of partition m, shared by all four gates.
  const vqc::VqcConfig& config(std::size_t m) const { return configs_[m]; }

  const vqc::VqcParams& params(GateId gate, std::size_t m) const;
  vqc::VqcParams& params(GateId gate, std::size_t m);

  /// Offset of the 0th input/output element of partition m.
  std::size_t input_offset(std::size_t m) const { return input_offsets_[m]; }
  std::size_t output_offset(std::size_t m) const { return output_offsets_[m]; }

  /// Draws every bank uniformly from [-0.1, 0.1].
  void init_params(std::mt19937_64& rng);

  /// All banks flattened gate-major, then partition, then parameter index.
  std::size_t num_params() const;
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> values);
  /// Offset of (gate, m) within the flattened layout.
  std::size_t flat_offset(GateId gate, std::size_t m) const;

 private:
  int input_dim_;
  int hidden_dim_;
  int depth_;
  bool hadamard_;
  PartitionPlan plan_;
  std::vector<vqc::VqcConfig> configs_;
  std::vector<std::size_t> input_offsets_;
  std::vector<std::size_t> output_offsets_;
  std::array<std::vector<vqc::VqcParams>, 4> banks_;
};

std::vector<double> concat_input(std::span<const double> h_prev, std::span<const double> x);

std::vector<std::vector<double>> partition_input(std::span<const double> v, const PartitionPlan& plan);

/// Jobs evaluating `gate` on every partition of v, ids starting at `first_id`.
std::vector<dispatch::JobRequest> gate_jobs(GateId gate, const QlstmCell& cell,
                                            std::span<const double> v, dispatch::JobKind kind,
                                            std::uint64_t first_id = 0);

/// Pre-activation gate vector (length d_h): the M sub-circuit outputs concatenated
/// in partition order. Throws JobFailure naming the failing partition.
std::vector<double> gate_forward(GateId gate, const QlstmCell& cell, std::span<const double> v,
                                 dispatch::Executor& executor);

struct RawGates {
  std::array<std::vector<double>, 4> values;

  std::vector<double>& operator[](GateId g) { return values[static_cast<int>(g)]; }
  const std::vector<double>& operator[](GateId g) const { return values[static_cast<int>(g)]; }
};

/// Everything one step produced; the backward pass reads it.
struct StepCache {
  std::vector<double> v;
  std::vector<double> cell_prev;
  RawGates raw;
  std::vector<double> forget, input, candidate, output;
  std::vector<double> cell;
  std::vector<double> tanh_cell;
  std::vector<double> hidden;

  QlstmState state() const { return {hidden, cell}; }
};

/// Applies activations and the state update to already computed raw gates.
StepCache apply_gates(const RawGates& raw, const QlstmState& prev);

/// One timestep: 4*M sub-circuit jobs in a single batch, then the state update.
StepCache cell_step(const QlstmCell& cell, std::span<const double> x, const QlstmState& prev,
                    dispatch::Executor& executor);

struct Readout {
  std::vector<double> weights;
  double bias = 0.0;

  double predict(std::span<const double> hidden) const;
};

struct SequenceTrace {
  std::vector<StepCache> steps;
  std::vector<double> predictions;
};

/// Unrolls cell_step over `inputs` and applies the read-out at every step.
SequenceTrace sequence_forward(const QlstmCell& cell, const Readout& readout,
                               std::span<const std::vector<double>> inputs, const QlstmState& initial,
                               dispatch::Executor& executor);

struct ResourceEstimate {
  long long p_vqc = 0;
  long long p_gates = 0;
  long long p_total = 0;
  long long total_qubits = 0;
  long long per_qpu_qubits = 0;
  int n_extra = 0;
};

/// Parameter and qubit counts with P_VQC = 2*q*L.
ResourceEstimate estimate_resources(int input_dim, int hidden_dim, int partitions, int depth,
                                    int qubits, int n_extra);

}  // namespace dqlstm::qlstm
