#pragma once

// Minimal blocking TCP helpers shared by the worker pool and the worker server.

#include <cstddef>
#include <optional>
#include <string>

namespace dqlstm::net {

/// Owns a socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset();

 private:
  int fd_ = -1;
};

struct HostPort {
  std::string host;
  int port = 0;
};

/// Splits "host:port". Throws ValidationError.
HostPort parse_host_port(const std::string& address);

/// Throws std::system_error when the peer is unreachable.
Socket connect_to(const std::string& address);

/// Bound and listening socket; port 0 picks an ephemeral port.
Socket listen_on(const std::string& address);
int local_port(const Socket& socket);

/// Throws std::system_error on failure.
void send_all(const Socket& socket, const std::string& data);

/// Buffers reads and splits the stream on '\n'.
class LineReader {
 public:
  static constexpr std::size_t kMaxLine = std::size_t{64} << 20;

  explicit LineReader(const Socket& socket) : socket_(&socket) {}

  /// Next line without its terminator; nullopt on orderly EOF. Throws
  /// std::system_error on I/O errors and ProtocolError on oversized lines.
  std::optional<std::string> read_line();

 private:
  const Socket* socket_;
  std::string buffer_;
};

}  // namespace dqlstm::net
