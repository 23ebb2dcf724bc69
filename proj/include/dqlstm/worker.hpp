#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

namespace dqlstm::worker {

/// Answers one request frame. Sets `close_connection` when the frame was
/// malformed and the peer should be dropped.
std::string handle_frame(const std::string& frame, int max_qubits, bool& close_connection);

/// TCP worker that simulates sub-circuit jobs. The socket is bound on
/// construction, so port() is valid immediately (bind to port 0 for an
/// ephemeral port).
class WorkerServer {
 public:
  WorkerServer(const std::string& bind_address, int max_qubits);
  ~WorkerServer();
  WorkerServer(const WorkerServer&) = delete;
  WorkerServer& operator=(const WorkerServer&) = delete;

  int port() const;
  std::string address() const;

  /// Accept loop; returns after stop().
  void serve();
  void stop();

  /// Jobs computed successfully or with an error status since start.
  std::uint64_t jobs_handled() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and serves until the process is terminated.
void serve_worker(const std::string& bind_address, int max_qubits);

}  // namespace dqlstm::worker
