#include "rkex/random.hpp"

#include <openssl/crypto.h>
#include <openssl/rand.h>

#include <algorithm>

#include <array>
#include <climits>

#include "rkex/error.hpp"

namespace rkex {

std::uint64_t RandomSource::next_u64() {
  std::array<std::uint8_t, 8> buf{};
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t RandomSource::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below: empty range");
  // Largest multiple of bound that fits in 2^64; draws at or above it are
  // rejected so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

std::uint64_t RandomSource::uniform_closed(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw InvalidArgument("uniform_closed: lo > hi");
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return next_u64();
  return lo + uniform_below(span + 1);
}

namespace {
void rand_bytes(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (out.size() > static_cast<std::size_t>(INT_MAX) ||
      RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error("secure random generator failure");
  }
}
}  // namespace

SecureRandom::~SecureRandom() { OPENSSL_cleanse(buf_.data(), buf_.size()); }

void SecureRandom::fill(std::span<std::uint8_t> out) {
  if (out.size() > buf_.size() / 4) {
    rand_bytes(out);
    return;
  }
  if (avail_ < out.size()) {
    rand_bytes(buf_);
    avail_ = buf_.size();
  }
  // Consume from the tail and wipe what was handed out.
  std::uint8_t* src = buf_.data() + (avail_ - out.size());
  std::copy_n(src, out.size(), out.data());
  OPENSSL_cleanse(src, out.size());
  avail_ -= out.size();
}

void InsecureTestRandom::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t v = engine_();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(v);
      v >>= 8;
    }
  }
}

}  // namespace rkex
