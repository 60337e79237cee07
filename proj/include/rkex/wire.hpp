#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rkex/bytes.hpp"
#include "rkex/hashcipher.hpp"
#include "rkex/kep.hpp"

namespace rkex {

enum class MsgType : std::uint8_t {
  Hello = 0x01,
  Share = 0x02,
  Cipher = 0x03,
  Envelope = 0x04,
  Error = 0x7F,
};

const char* to_string(MsgType t);

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kFrameHeaderBytes = 14;  // magic(4) version(1) type(1) length(8)
inline constexpr std::uint64_t kDefaultMaxPayload = 64ull << 20;
inline constexpr std::size_t kHelloBytes = 21;

struct WireFrame {
  MsgType type;
  Bytes payload;

  friend bool operator==(const WireFrame&, const WireFrame&) = default;
};

struct FrameHeader {
  MsgType type;
  std::uint64_t length;
};

/// "RKEX" || version || type || length u64 LE || payload
Bytes encode_frame(const WireFrame& frame);
/// Validates magic, version, type and length <= max_payload.
FrameHeader decode_frame_header(ByteView header, std::uint64_t max_payload = kDefaultMaxPayload);
/// Decodes exactly one frame occupying the whole buffer.
WireFrame decode_frame(ByteView data, std::uint64_t max_payload = kDefaultMaxPayload);

/// p u64 LE || rowsA u32 LE || columnsA u32 LE || t u32 LE || hash_id u8
Bytes encode_hello(const ParamSet& params);
ParamSet decode_hello(ByteView data);

/// count u32 LE || count matrices in write_matrix format
Bytes encode_share(const PublicShare& share);
/// Requires count = t, every matrix rowsA x rowsA, every entry < p.
PublicShare decode_share(ByteView data, const ParamSet& params);

/// share(C) || D (64 raw bytes)
Bytes encode_ciphertext(const CipherText& ct);
CipherText decode_ciphertext(ByteView data, const ParamSet& params);

}  // namespace rkex
