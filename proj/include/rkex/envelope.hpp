#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rkex/bytes.hpp"
#include "rkex/random.hpp"

namespace rkex {

inline constexpr std::size_t kNhBlockBytes = 1024;
inline constexpr std::size_t kNhKeyWords = kNhBlockBytes / 4;
inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 64;

struct NhResult {
  Bytes hm;               // NH(block_1) || ... || NH(block_r) || Len, all big-endian
  std::uint64_t bit_len;  // Len
};

/// NH universal hash over 1024-byte blocks, the last block zero-padded.
/// Each block: sum over i of (m[2i] + k[2i]) * (m[2i+1] + k[2i+1]), words
/// little-endian u32, additions mod 2^32, sum mod 2^64.
NhResult nh_hash(std::span<const std::uint32_t> key_words, ByteView message);

/// Shared authentication key: the 64-byte secret plus its NH key schedule.
class MacKey {
 public:
  /// NH words come from SHA3-512(k || counter_be32) for counter = 0, 1, ...
  explicit MacKey(const Digest512& k);
  /// Throws InvalidArgument unless k is exactly 64 bytes.
  static MacKey from_bytes(ByteView k);

  const Digest512& k() const { return k_; }
  std::span<const std::uint32_t> nh_key() const { return nh_key_; }

 private:
  Digest512 k_;
  std::vector<std::uint32_t> nh_key_;
};

struct Envelope {
  Bytes payload;
  Bytes tag;    // 64 bytes when well-formed
  Bytes nonce;  // 16 bytes when well-formed
  std::string timestamp;  // ISO-8601 UTC; informational, not authenticated

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

std::string iso8601_utc(std::chrono::system_clock::time_point t);

/// HMAC-SHA3-512(k, NH(payload) || nonce).
Digest512 compute_tag(const MacKey& key, ByteView payload, ByteView nonce);

/// Fresh random nonce, tag over (payload, nonce), current UTC timestamp.
Envelope seal_envelope(const MacKey& key, ByteView payload, RandomSource& rng,
                       const Clock& clock = [] { return std::chrono::system_clock::now(); });

enum class VerifyStatus { Accept, TagMismatch, Malformed, Replay };

struct VerifyResult {
  VerifyStatus status;
  bool accepted() const { return status == VerifyStatus::Accept; }
};

const char* to_string(VerifyStatus s);

/// Optional receiver-side nonce memory. Thread-safe.
class ReplayCache {
 public:
  /// Records the nonce; false if it was seen before.
  bool insert(ByteView nonce);

 private:
  std::mutex mu_;
  std::set<Bytes> seen_;
};

/// Recomputes the tag and compares in constant time. Nonces are only
/// recorded in the cache after the tag checks out.
VerifyResult verify_envelope(const MacKey& key, const Envelope& env, ReplayCache* replay = nullptr);

/// payload_len u32 LE || payload || nonce(16) || tag(64) || ts_len u16 LE || ts
Bytes encode_envelope(const Envelope& env);
Envelope decode_envelope(ByteView data);

/// Optional sender ID carried in front of the application data:
/// id_len u16 LE || id || data. Never interpreted by verification.
struct IdentifiedPayload {
  Bytes id;
  Bytes data;
};
Bytes pack_identified(ByteView id, ByteView data);
IdentifiedPayload unpack_identified(ByteView payload);

}  // namespace rkex
