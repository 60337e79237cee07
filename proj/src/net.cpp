#include "rkex/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "rkex/error.hpp"

namespace rkex {

std::size_t MemoryChannel::read_some(std::span<std::uint8_t> out) {
  const std::size_t n = std::min(out.size(), input_.size() - pos_);
  std::copy_n(input_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
  pos_ += n;
  return n;
}

std::pair<std::string, std::uint16_t> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size()) {
    throw InvalidArgument("address must be host:port, got '" + address + "'");
  }
  std::string host = address.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  const std::string port_text = address.substr(colon + 1);
  if (!std::all_of(port_text.begin(), port_text.end(), [](unsigned char c) { return std::isdigit(c); }) ||
      port_text.size() > 5 || std::stoul(port_text) > 65535) {
    throw InvalidArgument("invalid port in '" + address + "'");
  }
  return {host.empty() ? "0.0.0.0" : host, static_cast<std::uint16_t>(std::stoul(port_text))};
}

namespace {

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

AddrInfo resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo out;
  const int rc = getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &out.head);
  if (rc != 0) throw ProtocolError("cannot resolve '" + host + "': " + gai_strerror(rc));
  return out;
}

[[noreturn]] void throw_errno(const std::string& what) {
  throw ProtocolError(what + ": " + std::strerror(errno));
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

Socket Socket::connect(const std::string& address, std::chrono::milliseconds connect_wait) {
  const auto [host, port] = split_address(address);
  const auto deadline = std::chrono::steady_clock::now() + connect_wait;
  for (;;) {
    AddrInfo ai = resolve(host, port, false);
    int last_errno = 0;
    for (addrinfo* it = ai.head; it != nullptr; it = it->ai_next) {
      const int fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, it->ai_addr, it->ai_addrlen) == 0) {
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return Socket(fd);
      }
      last_errno = errno;
      ::close(fd);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      throw ProtocolError("cannot connect to " + address + ": " + std::strerror(last_errno));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

void Socket::set_timeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  if (::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv) != 0 ||
      ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv) != 0) {
    throw_errno("setsockopt");
  }
}

void Socket::shutdown_write() { ::shutdown(fd_, SHUT_WR); }

std::size_t Socket::read_some(std::span<std::uint8_t> out) {
  for (;;) {
    const ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) throw ProtocolError("timed out waiting for peer");
    throw_errno("recv");
  }
}

void Socket::write_all(ByteView data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw ProtocolError("timed out sending to peer");
      throw_errno("send");
    }
    off += static_cast<std::size_t>(n);
  }
}

Listener::Listener(const std::string& address) : fd_(-1), port_(0) {
  const auto [host, port] = split_address(address);
  AddrInfo ai = resolve(host, port, true);
  for (addrinfo* it = ai.head; it != nullptr; it = it->ai_next) {
    const int fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, it->ai_addr, it->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  if (fd_ < 0) throw_errno("cannot listen on " + address);
  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  if (bound.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  }
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

Socket Listener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return Socket(fd);
    }
    if (errno != EINTR) throw_errno("accept");
  }
}

void FrameChannel::send(const WireFrame& frame) { io_.write_all(encode_frame(frame)); }

bool FrameChannel::read_exact(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    const std::size_t n = io_.read_some(out.subspan(got));
    if (n == 0) {
      if (got == 0) return false;
      throw DecodingError("connection closed mid-frame");
    }
    got += n;
  }
  return true;
}

std::optional<WireFrame> FrameChannel::recv() {
  std::array<std::uint8_t, kFrameHeaderBytes> header{};
  if (!read_exact(header)) return std::nullopt;
  const FrameHeader h = decode_frame_header(header, max_payload_);
  // Grow as bytes arrive so a lying length field costs at most one chunk.
  constexpr std::size_t kChunk = 1 << 20;
  Bytes payload;
  while (payload.size() < h.length) {
    const std::size_t old = payload.size();
    const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, h.length - old));
    payload.resize(old + want);
    if (!read_exact(std::span(payload).subspan(old, want))) throw DecodingError("connection closed mid-frame");
  }
  return WireFrame{h.type, std::move(payload)};
}

}  // namespace rkex
