#include "dqlstm/worker.hpp"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <mutex>
#include <system_error>
#include <thread>
#include <vector>

#include <spdlog/spdlog.h>

#include "dqlstm/dispatch.hpp"
#include "dqlstm/error.hpp"
#include "dqlstm/wire.hpp"
#include "net.hpp"

namespace dqlstm::worker {

std::string handle_frame(const std::string& frame, int max_qubits, bool& close_connection) {
  close_connection = false;
  dispatch::JobRequest job;
  try {
    job = wire::decode_request(frame);
  } catch (const ProtocolError& e) {
    close_connection = true;
    return wire::encode_response(dispatch::JobResult::failure(0, std::string("malformed frame: ") + e.what()));
  }
  if (job.config.num_qubits > max_qubits) {
    return wire::encode_response(dispatch::JobResult::failure(job.job_id, "qubit capacity exceeded"));
  }
  return wire::encode_response(dispatch::execute_job(job, max_qubits));
}

struct WorkerServer::Impl {
  net::Socket listener;
  int wake_pipe[2] = {-1, -1};
  int max_qubits = qsim::kDefaultMaxQubits;
  std::string host;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> handled{0};

  std::mutex mutex;
  std::vector<int> open_fds;
  std::vector<std::thread> connections;

  void handle_connection(net::Socket socket) {
    {
      std::lock_guard lock(mutex);
      if (stopping) return;
      open_fds.push_back(socket.fd());
    }
    net::LineReader reader(socket);
    try {
      while (auto line = reader.read_line()) {
        bool close = false;
        const std::string reply = handle_frame(*line, max_qubits, close);
        handled.fetch_add(1);
        net::send_all(socket, reply + "\n");
        if (close) {
          spdlog::warn("closing connection after malformed frame");
          break;
        }
      }
    } catch (const ProtocolError& e) {
      spdlog::warn("dropping connection: {}", e.what());
      try {
        net::send_all(socket, wire::encode_response(dispatch::JobResult::failure(
                                  0, std::string("malformed frame: ") + e.what())) + "\n");
      } catch (const std::system_error&) {
      }
    } catch (const std::system_error& e) {
      spdlog::debug("connection ended: {}", e.what());
    }
    std::lock_guard lock(mutex);
    std::erase(open_fds, socket.fd());
  }
};

WorkerServer::WorkerServer(const std::string& bind_address, int max_qubits)
    : impl_(std::make_unique<Impl>()) {
  if (max_qubits < 1) throw ValidationError("max_qubits must be >= 1");
  impl_->max_qubits = max_qubits;
  impl_->host = net::parse_host_port(bind_address).host;
  impl_->listener = net::listen_on(bind_address);
  if (::pipe(impl_->wake_pipe) != 0) throw std::system_error(errno, std::generic_category(), "pipe");
}

WorkerServer::~WorkerServer() {
  stop();
  for (auto& t : impl_->connections) {
    if (t.joinable()) t.join();
  }
  for (int fd : impl_->wake_pipe) {
    if (fd >= 0) ::close(fd);
  }
}

int WorkerServer::port() const { return net::local_port(impl_->listener); }

std::string WorkerServer::address() const {
  const std::string host = impl_->host.empty() || impl_->host == "0.0.0.0" ? "127.0.0.1" : impl_->host;
  return host + ":" + std::to_string(port());
}

std::uint64_t WorkerServer::jobs_handled() const { return impl_->handled.load(); }

void WorkerServer::serve() {
  spdlog::info("worker listening on port {} (max {} qubits)", port(), impl_->max_qubits);
  while (!impl_->stopping) {
    pollfd fds[2] = {{impl_->listener.fd(), POLLIN, 0}, {impl_->wake_pipe[0], POLLIN, 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "poll");
    }
    if (fds[1].revents || impl_->stopping) break;
    if (fds[0].revents & POLLIN) {
      net::Socket client(::accept(impl_->listener.fd(), nullptr, nullptr));
      if (!client.valid()) continue;
      std::lock_guard lock(impl_->mutex);
      impl_->connections.emplace_back(
          [impl = impl_.get(), s = std::move(client)]() mutable { impl->handle_connection(std::move(s)); });
    }
  }
  std::vector<std::thread> connections;
  {
    std::lock_guard lock(impl_->mutex);
    connections.swap(impl_->connections);
  }
  for (auto& t : connections) t.join();
  spdlog::info("worker stopped after {} jobs", jobs_handled());
}

void WorkerServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  const char byte = 1;
  [[maybe_unused]] const auto n = ::write(impl_->wake_pipe[1], &byte, 1);
  std::lock_guard lock(impl_->mutex);
  for (int fd : impl_->open_fds) ::shutdown(fd, SHUT_RDWR);
}

void serve_worker(const std::string& bind_address, int max_qubits) {
  WorkerServer server(bind_address, max_qubits);
  server.serve();
}

}  // namespace dqlstm::worker
