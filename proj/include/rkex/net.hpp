#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <array>

#include "rkex/bytes.hpp"
#include "rkex/wire.hpp"

namespace rkex {

/// Blocking byte transport.
class ByteChannel {
 public:
  virtual ~ByteChannel() = default;
  /// Returns 0 on orderly end of stream.
  virtual std::size_t read_some(std::span<std::uint8_t> out) = 0;
  virtual void write_all(ByteView data) = 0;
};

/// In-memory channel: reads from a fixed buffer, records everything written.
class MemoryChannel final : public ByteChannel {
 public:
  explicit MemoryChannel(Bytes input) : input_(std::move(input)) {}
  std::size_t read_some(std::span<std::uint8_t> out) override;
  void write_all(ByteView data) override { output_.insert(output_.end(), data.begin(), data.end()); }
  const Bytes& output() const { return output_; }

 private:
  Bytes input_;
  std::size_t pos_ = 0;
  Bytes output_;
};

/// Connected TCP socket. Move-only; closes on destruction.
class Socket final : public ByteChannel {
 public:
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() override;

  /// Retries refused connections until connect_wait elapses.
  static Socket connect(const std::string& address, std::chrono::milliseconds connect_wait);

  void set_timeout(std::chrono::milliseconds timeout);
  void shutdown_write();

  std::size_t read_some(std::span<std::uint8_t> out) override;
  void write_all(ByteView data) override;

 private:
  int fd_;
};

class Listener {
 public:
  /// address is "host:port"; port 0 picks an ephemeral port.
  explicit Listener(const std::string& address);
  Listener(Listener&& other) noexcept : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  std::uint16_t port() const { return port_; }
  Socket accept();

 private:
  int fd_;
  std::uint16_t port_;
};

/// Splits "host:port". Throws InvalidArgument.
std::pair<std::string, std::uint16_t> split_address(const std::string& address);

/// Frame-level I/O over a byte channel.
class FrameChannel {
 public:
  explicit FrameChannel(ByteChannel& io, std::uint64_t max_payload = kDefaultMaxPayload)
      : io_(io), max_payload_(max_payload) {}

  void send(const WireFrame& frame);
  /// nullopt on end of stream at a frame boundary. Throws DecodingError for
  /// malformed or truncated frames.
  std::optional<WireFrame> recv();

 private:
  bool read_exact(std::span<std::uint8_t> out);  // false on EOF before first byte

  ByteChannel& io_;
  std::uint64_t max_payload_;
};

}  // namespace rkex
