#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace rkex {

/// Source of uniformly random bytes. Implementations are not thread-safe;
/// each thread owns its own source.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64();

  /// Exactly uniform in [0, bound) via rejection sampling. bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Exactly uniform in the closed interval [lo, hi].
  std::uint64_t uniform_closed(std::uint64_t lo, std::uint64_t hi);
};

/// OpenSSL's DRBG. The only source used on production paths. Small
/// requests are served from an internal 4 KiB refill buffer, wiped on
/// destruction.
class SecureRandom final : public RandomSource {
 public:
  SecureRandom() = default;
  SecureRandom(const SecureRandom&) = delete;
  SecureRandom& operator=(const SecureRandom&) = delete;
  ~SecureRandom() override;

  void fill(std::span<std::uint8_t> out) override;

 private:
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t avail_ = 0;
};

/// Seeded, reproducible and NOT secure. Tests and `--insecure-test-rng` only.
class InsecureTestRandom final : public RandomSource {
 public:
  explicit InsecureTestRandom(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

}  // namespace rkex
