#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "bqkd/errors.hpp"
#include "bqkd/transport.hpp"

namespace bqkd {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::TransportFailure, what + ": " + std::strerror(errno));
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head != nullptr) freeaddrinfo(head);
  }
};

AddrInfo resolve(const std::string& host, int port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo out;
  const std::string service = std::to_string(port);
  const int rc = getaddrinfo(host.c_str(), service.c_str(), &hints, &out.head);
  if (rc != 0) throw Error(ErrorCode::TransportFailure, "resolve " + host + ": " + gai_strerror(rc));
  return out;
}

void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

SocketChannel::SocketChannel(int fd) : fd_(fd) { set_nodelay(fd_); }

SocketChannel::~SocketChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void SocketChannel::send(const WireMessage& m) {
  std::string line = encode_line(m);
  line += '\n';
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("send");
    }
    off += static_cast<std::size_t>(n);
  }
}

WireMessage SocketChannel::recv() {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return decode_line(line);
    }
    char chunk[65536];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n == 0) throw Error(ErrorCode::TransportFailure, "peer closed the connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("recv");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::unique_ptr<SocketChannel> SocketChannel::connect(const std::string& host, int port, int timeout_ms) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    AddrInfo ai = resolve(host, port, false);
    const int fd = ::socket(ai.head->ai_family, ai.head->ai_socktype, ai.head->ai_protocol);
    if (fd < 0) fail("socket");
    if (::connect(fd, ai.head->ai_addr, ai.head->ai_addrlen) == 0) return std::make_unique<SocketChannel>(fd);
    const int err = errno;
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      errno = err;
      fail("connect " + host + ":" + std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

Listener::Listener(const std::string& host, int port) : fd_(-1), port_(port) {
  AddrInfo ai = resolve(host, port, true);
  fd_ = ::socket(ai.head->ai_family, ai.head->ai_socktype, ai.head->ai_protocol);
  if (fd_ < 0) fail("socket");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd_, ai.head->ai_addr, ai.head->ai_addrlen) != 0) {
    ::close(fd_);
    fail("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(fd_, 4) != 0) {
    ::close(fd_);
    fail("listen");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  if (getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0) port_ = ntohs(bound.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<SocketChannel> Listener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<SocketChannel>(fd);
    if (errno != EINTR) fail("accept");
  }
}

}  // namespace bqkd
