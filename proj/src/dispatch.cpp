#include "dqlstm/dispatch.hpp"

#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

#include "dqlstm/error.hpp"
#include "dqlstm/wire.hpp"
#include "net.hpp"

namespace dqlstm::dispatch {

const char* to_string(JobKind kind) {
  switch (kind) {
    case JobKind::Evaluate:
      return "evaluate";
    case JobKind::ParamShiftGradient:
      return "param_shift_gradient";
    case JobKind::InputJacobian:
      return "input_jacobian";
  }
  return "unknown";
}

JobKind job_kind_from_string(const std::string& name) {
  if (name == "evaluate") return JobKind::Evaluate;
  if (name == "param_shift_gradient") return JobKind::ParamShiftGradient;
  if (name == "input_jacobian") return JobKind::InputJacobian;
  throw ValidationError("unknown job kind '" + name + "'");
}

JobResult JobResult::failure(std::uint64_t job_id, std::string message) {
  JobResult r;
  r.job_id = job_id;
  r.ok = false;
  r.message = std::move(message);
  return r;
}

JobResult execute_job(const JobRequest& job, int max_qubits) {
  try {
    job.config.validate(max_qubits);
    JobResult result;
    result.job_id = job.job_id;
    switch (job.kind) {
      case JobKind::Evaluate: {
        auto values = vqc::evaluate(job.config, job.params, job.features);
        const std::size_t cols = values.size();
        result.payload = Matrix(1, cols, std::move(values));
        break;
      }
      case JobKind::ParamShiftGradient:
        result.payload = vqc::param_shift_gradient(job.config, job.params, job.features);
        break;
      case JobKind::InputJacobian:
        result.payload = vqc::input_jacobian(job.config, job.params, job.features);
        break;
    }
    return result;
  } catch (const Error& e) {
    return JobResult::failure(job.job_id, e.what());
  }
}

std::vector<JobResult> SequentialExecutor::submit_batch(std::span<const JobRequest> jobs) {
  std::vector<JobResult> results;
  results.reserve(jobs.size());
  for (const auto& job : jobs) results.push_back(execute_job(job));
  return results;
}

std::vector<WorkerEndpoint> parse_pool(const std::string& text) {
  std::vector<WorkerEndpoint> endpoints;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    WorkerEndpoint ep;
    if (!(tokens >> ep.address)) continue;
    std::string option;
    while (tokens >> option) {
      if (option.rfind("capacity=", 0) != 0) {
        throw ValidationError("pool line " + std::to_string(line_no) + ": unknown option '" +
                              option + "'");
      }
      try {
        std::size_t used = 0;
        ep.capacity = std::stoi(option.substr(9), &used);
        if (used != option.size() - 9) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError("pool line " + std::to_string(line_no) + ": bad capacity");
      }
    }
    if (ep.capacity < 1) {
      throw ValidationError("pool line " + std::to_string(line_no) + ": capacity must be >= 1");
    }
    if (!ep.in_process()) net::parse_host_port(ep.address);
    endpoints.push_back(ep);
  }
  if (endpoints.empty()) throw ValidationError("pool lists no endpoints");
  return endpoints;
}

std::vector<WorkerEndpoint> read_pool_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pool file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pool(buffer.str());
}

std::vector<WorkerEndpoint> in_process_endpoints(int workers) {
  if (workers < 1) throw ValidationError("worker count must be >= 1");
  return std::vector<WorkerEndpoint>(static_cast<std::size_t>(workers), WorkerEndpoint{});
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kNoEndpoint = static_cast<std::size_t>(-1);

struct Task {
  std::size_t index = 0;
  int attempt = 0;
  std::size_t excluded = kNoEndpoint;
};

struct Outcome {
  JobResult result;
  bool unreachable = false;
};

}  // namespace

struct WorkerPool::Impl {
  struct Slot {
    std::size_t endpoint = 0;
    net::Socket connection;
    std::unique_ptr<net::LineReader> reader;
    std::thread thread;
  };

  std::vector<WorkerEndpoint> endpoints;
  Hooks hooks;
  std::vector<std::unique_ptr<Slot>> slots;

  std::mutex submit_mutex;
  std::mutex mutex;
  std::condition_variable work_cv;
  std::condition_variable done_cv;
  std::vector<std::deque<Task>> queues;
  std::span<const JobRequest> jobs;
  std::vector<JobResult>* results = nullptr;
  std::size_t remaining = 0;
  bool stopping = false;

  // Own queue first, then steal from the back of the others.
  bool take(std::size_t endpoint, Task& out) {
    auto& own = queues[endpoint];
    for (auto it = own.begin(); it != own.end(); ++it) {
      if (it->excluded != endpoint) {
        out = *it;
        own.erase(it);
        return true;
      }
    }
    for (std::size_t k = 1; k < queues.size(); ++k) {
      auto& other = queues[(endpoint + k) % queues.size()];
      for (auto it = other.rbegin(); it != other.rend(); ++it) {
        if (it->excluded != endpoint) {
          out = *it;
          other.erase(std::next(it).base());
          return true;
        }
      }
    }
    return false;
  }

  Outcome run_remote(Slot& slot, const JobRequest& job) {
    const auto& address = endpoints[slot.endpoint].address;
    try {
      if (!slot.connection.valid()) {
        slot.connection = net::connect_to(address);
        slot.reader = std::make_unique<net::LineReader>(slot.connection);
      }
      net::send_all(slot.connection, wire::encode_request(job) + "\n");
      auto line = slot.reader->read_line();
      if (!line) throw std::system_error(std::make_error_code(std::errc::connection_reset), "worker closed connection");
      JobResult result = wire::decode_response(*line);
      if (result.job_id != job.job_id) {
        throw ProtocolError("response job_id " + std::to_string(result.job_id) + " does not match " +
                            std::to_string(job.job_id));
      }
      return {std::move(result), false};
    } catch (const std::system_error& e) {
      slot.reader.reset();
      slot.connection.reset();
      return {JobResult::failure(job.job_id, "worker " + address + " unreachable: " + e.what()), true};
    } catch (const ProtocolError& e) {
      slot.reader.reset();
      slot.connection.reset();
      return {JobResult::failure(job.job_id, std::string("protocol error from ") + address + ": " + e.what()),
              false};
    } catch (const ValidationError& e) {
      return {JobResult::failure(job.job_id, e.what()), true};
    }
  }

  void worker_loop(Slot& slot) {
    std::unique_lock lock(mutex);
    while (true) {
      Task task;
      work_cv.wait(lock, [&] { return stopping || take(slot.endpoint, task); });
      if (stopping) return;
      const JobRequest& job = jobs[task.index];
      lock.unlock();

      if (hooks.before_execute) hooks.before_execute(job, slot.endpoint);
      Outcome outcome = endpoints[slot.endpoint].in_process() ? Outcome{execute_job(job), false}
                                                              : run_remote(slot, job);
      lock.lock();
      if (outcome.unreachable && task.attempt == 0 && endpoints.size() > 1) {
        task.attempt = 1;
        task.excluded = slot.endpoint;
        queues[(slot.endpoint + 1) % endpoints.size()].push_front(task);
        work_cv.notify_all();
        continue;
      }
      (*results)[task.index] = std::move(outcome.result);
      if (--remaining == 0) done_cv.notify_all();
    }
  }
};

WorkerPool::WorkerPool(std::vector<WorkerEndpoint> endpoints, Hooks hooks)
    : impl_(std::make_unique<Impl>()) {
  if (endpoints.empty()) throw ValidationError("worker pool needs at least one endpoint");
  impl_->endpoints = std::move(endpoints);
  impl_->hooks = std::move(hooks);
  impl_->queues.resize(impl_->endpoints.size());
  for (std::size_t e = 0; e < impl_->endpoints.size(); ++e) {
    const auto& ep = impl_->endpoints[e];
    if (ep.capacity < 1) throw ValidationError("endpoint capacity must be >= 1");
    if (!ep.in_process()) net::parse_host_port(ep.address);
    for (int c = 0; c < ep.capacity; ++c) {
      auto slot = std::make_unique<Impl::Slot>();
      slot->endpoint = e;
      impl_->slots.push_back(std::move(slot));
    }
  }
  for (auto& slot : impl_->slots) {
    Impl::Slot* raw = slot.get();
    slot->thread = std::thread([this, raw] { impl_->worker_loop(*raw); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->work_cv.notify_all();
  for (auto& slot : impl_->slots) {
    if (slot->thread.joinable()) slot->thread.join();
  }
}

const std::vector<WorkerEndpoint>& WorkerPool::endpoints() const { return impl_->endpoints; }

std::vector<JobResult> WorkerPool::submit_batch(std::span<const JobRequest> jobs) {
  if (jobs.empty()) throw UsageError("submit_batch needs at least one job");
  std::lock_guard submit(impl_->submit_mutex);
  std::vector<JobResult> results(jobs.size());
  {
    std::unique_lock lock(impl_->mutex);
    impl_->jobs = jobs;
    impl_->results = &results;
    impl_->remaining = jobs.size();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      impl_->queues[i % impl_->queues.size()].push_back(Task{i});
    }
    impl_->work_cv.notify_all();
    impl_->done_cv.wait(lock, [&] { return impl_->remaining == 0; });
    impl_->jobs = {};
    impl_->results = nullptr;
  }
  return results;
}

}  // namespace dqlstm::dispatch
