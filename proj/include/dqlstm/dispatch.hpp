#pragma once

// Job-level execution of sub-circuit evaluations and jacobians across a pool
// of workers. A worker is either an in-process thread or a remote process
// reached over the newline-delimited JSON protocol in wire.hpp.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dqlstm/matrix.hpp"
#include "dqlstm/qsim.hpp"
#include "dqlstm/vqc.hpp"

namespace dqlstm::dispatch {

enum class JobKind { Evaluate, ParamShiftGradient, InputJacobian };

const char* to_string(JobKind kind);
JobKind job_kind_from_string(const std::string& name);

struct JobRequest {
  std::uint64_t job_id = 0;
  JobKind kind = JobKind::Evaluate;
  vqc::VqcConfig config;
  std::vector<double> params;
  std::vector<double> features;
};

struct JobResult {
  std::uint64_t job_id = 0;
  bool ok = true;
  /// Evaluate: 1 x output_dim. Jacobians: output_dim x (num_params | input_dim).
  Matrix payload;
  std::string message;

  static JobResult failure(std::uint64_t job_id, std::string message);
};

/// Runs one job on the calling thread. Never throws; problems become error results.
JobResult execute_job(const JobRequest& job, int max_qubits = qsim::kDefaultMaxQubits);

class Executor {
 public:
  virtual ~Executor() = default;
  /// Results come back in request order.
  virtual std::vector<JobResult> submit_batch(std::span<const JobRequest> jobs) = 0;
};

/// Executes every job inline, in order.
class SequentialExecutor final : public Executor {
 public:
  std::vector<JobResult> submit_batch(std::span<const JobRequest> jobs) override;
};

struct WorkerEndpoint {
  static constexpr const char* kInProcess = "inprocess";

  std::string address = kInProcess;  ///< host:port or "inprocess"
  int capacity = 1;

  bool in_process() const { return address == kInProcess; }
};

/// One endpoint per line: `<address> [capacity=N]`; blank lines and `#` comments
/// are skipped. Throws ValidationError.
std::vector<WorkerEndpoint> parse_pool(const std::string& text);
std::vector<WorkerEndpoint> read_pool_file(const std::string& path);

/// Fans batches out over a fixed set of endpoints. Jobs are assigned round-robin
/// to endpoints; idle workers steal queued jobs from other endpoints. A job whose
/// remote endpoint cannot be reached is retried once on a different endpoint.
class WorkerPool final : public Executor {
 public:
  struct Hooks {
    /// Called on the worker thread right before a job executes. Test seam for
    /// delays and execution counting.
    std::function<void(const JobRequest&, std::size_t endpoint)> before_execute;
  };

  explicit WorkerPool(std::vector<WorkerEndpoint> endpoints, Hooks hooks = {});
  ~WorkerPool() override;
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::vector<JobResult> submit_batch(std::span<const JobRequest> jobs) override;

  const std::vector<WorkerEndpoint>& endpoints() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds a pool of `workers` in-process endpoints with capacity 1 each.
std::vector<WorkerEndpoint> in_process_endpoints(int workers);

}  // namespace dqlstm::dispatch
