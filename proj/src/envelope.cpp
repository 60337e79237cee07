#include "rkex/envelope.hpp"

#include <algorithm>
#include <ctime>

#include "rkex/error.hpp"
#include "rkex/hash.hpp"

namespace rkex {

namespace {

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t nh_block(std::span<const std::uint32_t> key, const std::uint8_t* block) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < kNhKeyWords; i += 2) {
    const std::uint32_t x = load_le32(block + 4 * i) + key[i];
    const std::uint32_t y = load_le32(block + 4 * (i + 1)) + key[i + 1];
    sum += static_cast<std::uint64_t>(x) * y;
  }
  return sum;
}

}  // namespace

NhResult nh_hash(std::span<const std::uint32_t> key_words, ByteView message) {
  if (key_words.size() < kNhKeyWords) throw InvalidArgument("NH key shorter than one block");
  ByteWriter out;
  out.reserve((message.size() / kNhBlockBytes + 2) * 8);
  std::size_t off = 0;
  while (off < message.size()) {
    const std::size_t n = std::min(kNhBlockBytes, message.size() - off);
    if (n == kNhBlockBytes) {
      out.u64be(nh_block(key_words, message.data() + off));
    } else {
      std::uint8_t padded[kNhBlockBytes] = {};
      std::copy_n(message.data() + off, n, padded);
      out.u64be(nh_block(key_words, padded));
    }
    off += n;
  }
  const std::uint64_t bits = static_cast<std::uint64_t>(message.size()) * 8;
  out.u64be(bits);
  return {std::move(out).take(), bits};
}

MacKey::MacKey(const Digest512& k) : k_(k) {
  nh_key_.reserve(kNhKeyWords);
  for (std::uint32_t counter = 0; nh_key_.size() < kNhKeyWords; ++counter) {
    ByteWriter in;
    in.raw(k_);
    in.u8(static_cast<std::uint8_t>(counter >> 24));
    in.u8(static_cast<std::uint8_t>(counter >> 16));
    in.u8(static_cast<std::uint8_t>(counter >> 8));
    in.u8(static_cast<std::uint8_t>(counter));
    const Digest512 block = sha3_512(in.bytes());
    for (std::size_t i = 0; i < block.size() && nh_key_.size() < kNhKeyWords; i += 4) {
      nh_key_.push_back(load_le32(block.data() + i));
    }
  }
}

MacKey MacKey::from_bytes(ByteView k) {
  if (k.size() != 64) throw InvalidArgument("MAC key must be 64 bytes");
  Digest512 d{};
  std::copy(k.begin(), k.end(), d.begin());
  return MacKey(d);
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Digest512 compute_tag(const MacKey& key, ByteView payload, ByteView nonce) {
  Bytes input = nh_hash(key.nh_key(), payload).hm;
  input.insert(input.end(), nonce.begin(), nonce.end());
  return hmac_sha3_512(key.k(), input);
}

Envelope seal_envelope(const MacKey& key, ByteView payload, RandomSource& rng, const Clock& clock) {
  Envelope env;
  env.payload.assign(payload.begin(), payload.end());
  env.nonce.resize(kNonceBytes);
  rng.fill(env.nonce);
  const Digest512 tag = compute_tag(key, env.payload, env.nonce);
  env.tag.assign(tag.begin(), tag.end());
  env.timestamp = iso8601_utc(clock());
  return env;
}

const char* to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Accept: return "accept";
    case VerifyStatus::TagMismatch: return "tag-mismatch";
    case VerifyStatus::Malformed: return "malformed";
    case VerifyStatus::Replay: return "replay";
  }
  return "unknown";
}

bool ReplayCache::insert(ByteView nonce) {
  std::lock_guard lock(mu_);
  return seen_.emplace(nonce.begin(), nonce.end()).second;
}

VerifyResult verify_envelope(const MacKey& key, const Envelope& env, ReplayCache* replay) {
  if (env.nonce.size() != kNonceBytes || env.tag.size() != kTagBytes ||
      env.payload.size() > UINT32_MAX || env.timestamp.size() > UINT16_MAX) {
    return {VerifyStatus::Malformed};
  }
  const Digest512 expected = compute_tag(key, env.payload, env.nonce);
  if (!constant_time_equal(expected, env.tag)) return {VerifyStatus::TagMismatch};
  if (replay != nullptr && !replay->insert(env.nonce)) return {VerifyStatus::Replay};
  return {VerifyStatus::Accept};
}

Bytes encode_envelope(const Envelope& env) {
  if (env.nonce.size() != kNonceBytes || env.tag.size() != kTagBytes) {
    throw InvalidArgument("envelope nonce/tag has wrong length");
  }
  if (env.payload.size() > UINT32_MAX) throw InvalidArgument("envelope payload too large");
  if (env.timestamp.size() > UINT16_MAX) throw InvalidArgument("envelope timestamp too long");
  ByteWriter out;
  out.reserve(4 + env.payload.size() + kNonceBytes + kTagBytes + 2 + env.timestamp.size());
  out.u32le(static_cast<std::uint32_t>(env.payload.size()));
  out.raw(env.payload);
  out.raw(env.nonce);
  out.raw(env.tag);
  out.u16le(static_cast<std::uint16_t>(env.timestamp.size()));
  out.raw(as_bytes(env.timestamp));
  return std::move(out).take();
}

Envelope decode_envelope(ByteView data) {
  ByteReader in(data);
  Envelope env;
  const std::uint32_t len = in.u32le();
  auto payload = in.raw(len);
  env.payload.assign(payload.begin(), payload.end());
  auto nonce = in.raw(kNonceBytes);
  env.nonce.assign(nonce.begin(), nonce.end());
  auto tag = in.raw(kTagBytes);
  env.tag.assign(tag.begin(), tag.end());
  auto ts = in.raw(in.u16le());
  env.timestamp.assign(ts.begin(), ts.end());
  in.expect_end("envelope");
  return env;
}

Bytes pack_identified(ByteView id, ByteView data) {
  if (id.size() > UINT16_MAX) throw InvalidArgument("identifier too long");
  ByteWriter out;
  out.u16le(static_cast<std::uint16_t>(id.size()));
  out.raw(id);
  out.raw(data);
  return std::move(out).take();
}

IdentifiedPayload unpack_identified(ByteView payload) {
  ByteReader in(payload);
  auto id = in.raw(in.u16le());
  auto data = in.raw(in.remaining());
  return {Bytes(id.begin(), id.end()), Bytes(data.begin(), data.end())};
}

}  // namespace rkex
