#pragma once

// Versioned text checkpoint: one `key = value` per line, vectors as
// space-separated shortest round-trip decimals.
//
//   format = dqlstm-checkpoint
//   version = 1
//   seed = <uint>
//   model.kind = qlstm | classical
//   model.input_dim, model.hidden_dim, model.depth, model.hadamard
//   plan.input_splits, plan.output_splits, plan.qubits        (qlstm only)
//   data.task, data.column, data.window, data.split, data.sequence_length,
//   data.normalization, data.norm_first, data.norm_second
//   params.<block> = values ...   in flat parameter order:
//     qlstm:     theta_f.0 .. theta_f.{M-1}, theta_i.*, theta_C.*, theta_o.*
//     classical: W_f W_i W_C W_o (row-major, d_h x (d_h + d_x)), b_f b_i b_C b_o
//     both:      readout.weights, readout.bias

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dqlstm/dispatch.hpp"
#include "dqlstm/model.hpp"
#include "dqlstm/qlstm.hpp"
#include "dqlstm/tasks.hpp"

namespace dqlstm::checkpoint {

inline constexpr int kVersion = 1;

enum class ModelKind { Qlstm, Classical };

struct ModelSpec {
  ModelKind kind = ModelKind::Qlstm;
  int input_dim = 3;
  int hidden_dim = 3;
  int depth = 2;
  bool hadamard = true;
  qlstm::PartitionPlan plan;  ///< ignored for the classical model

  void validate() const;
};

struct DataSpec {
  std::string task;
  std::string column;
  std::size_t window = 3;
  std::size_t split = 0;
  std::size_t sequence_length = 8;
  tasks::NormalizationStats normalization;
};

struct Checkpoint {
  ModelSpec model;
  DataSpec data;
  std::uint64_t seed = 0;
  std::vector<double> params;
};

/// (block name, length) pairs in flat parameter order.
std::vector<std::pair<std::string, std::size_t>> param_blocks(const ModelSpec& spec);

void save(const std::string& path, const Checkpoint& checkpoint);
/// Throws ValidationError on unknown versions, missing keys or size mismatches.
Checkpoint load(const std::string& path);

/// Fresh model with random initial parameters.
std::unique_ptr<train::SequenceModel> build_model(const ModelSpec& spec, dispatch::Executor& executor,
                                                  std::mt19937_64& rng);
std::unique_ptr<train::SequenceModel> restore_model(const Checkpoint& checkpoint, dispatch::Executor& executor);

}  // namespace dqlstm::checkpoint
