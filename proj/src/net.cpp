#include "net.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>
#include <system_error>

#include "dqlstm/error.hpp"

namespace dqlstm::net {

namespace {

std::system_error last_error(const std::string& what) {
  return std::system_error(errno, std::generic_category(), what);
}

struct AddrInfoDeleter {
  void operator()(addrinfo* p) const { freeaddrinfo(p); }
};

std::unique_ptr<addrinfo, AddrInfoDeleter> resolve(const HostPort& hp, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string port = std::to_string(hp.port);
  const char* host = hp.host.empty() || hp.host == "*" ? nullptr : hp.host.c_str();
  if (const int rc = getaddrinfo(host, port.c_str(), &hints, &result); rc != 0) {
    throw std::system_error(std::make_error_code(std::errc::host_unreachable),
                            "cannot resolve " + hp.host + ": " + gai_strerror(rc));
  }
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(result);
}

}  // namespace

Socket::~Socket() { reset(); }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    reset();
    fd_ = other.release();
  }
  return *this;
}

void Socket::reset() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

HostPort parse_host_port(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ValidationError("address '" + address + "' lacks :port");
  HostPort hp;
  hp.host = address.substr(0, colon);
  const std::string port = address.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), hp.port);
  if (ec != std::errc{} || ptr != port.data() + port.size() || hp.port < 0 || hp.port > 65535) {
    throw ValidationError("address '" + address + "' has an invalid port");
  }
  return hp;
}

Socket connect_to(const std::string& address) {
  const auto info = resolve(parse_host_port(address), false);
  Socket sock(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
  if (!sock.valid()) throw last_error("socket");
  if (::connect(sock.fd(), info->ai_addr, info->ai_addrlen) != 0) {
    throw last_error("connect " + address);
  }
  const int one = 1;
  ::setsockopt(sock.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return sock;
}

Socket listen_on(const std::string& address) {
  const auto info = resolve(parse_host_port(address), true);
  Socket sock(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
  if (!sock.valid()) throw last_error("socket");
  const int one = 1;
  ::setsockopt(sock.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(sock.fd(), info->ai_addr, info->ai_addrlen) != 0) throw last_error("bind " + address);
  if (::listen(sock.fd(), 64) != 0) throw last_error("listen " + address);
  return sock;
}

int local_port(const Socket& socket) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw last_error("getsockname");
  }
  return ntohs(addr.sin_port);
}

void send_all(const Socket& socket, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(socket.fd(), data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw last_error("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> LineReader::read_line() {
  std::size_t scanned = 0;
  while (true) {
    const auto nl = buffer_.find('\n', scanned);
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    scanned = buffer_.size();
    if (buffer_.size() > kMaxLine) throw ProtocolError("frame exceeds maximum line length");
    char chunk[8192];
    const ssize_t n = ::recv(socket_->fd(), chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw last_error("recv");
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      throw std::system_error(std::make_error_code(std::errc::connection_reset),
                              "connection closed mid-frame");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace dqlstm::net
