#include "rkex/wire.hpp"

#include <algorithm>

#include "rkex/error.hpp"

namespace rkex {

namespace {
constexpr std::uint8_t kMagic[4] = {'R', 'K', 'E', 'X'};

bool known_type(std::uint8_t t) {
  switch (static_cast<MsgType>(t)) {
    case MsgType::Hello:
    case MsgType::Share:
    case MsgType::Cipher:
    case MsgType::Envelope:
    case MsgType::Error:
      return true;
  }
  return false;
}

PublicShare read_share(ByteReader& in, const ParamSet& params) {
  const std::uint32_t count = in.u32le();
  if (count != params.cycles()) throw DecodingError("share carries " + std::to_string(count) +
                                                    " matrices, expected " + std::to_string(params.cycles()));
  std::vector<ZpMatrix> mats;
  mats.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    ZpMatrix m = read_matrix(in, params.modulus());
    if (m.rows() != params.rows_a() || m.cols() != params.rows_a()) {
      throw DecodingError("share matrix has wrong dimensions");
    }
    mats.push_back(std::move(m));
  }
  return PublicShare(params, std::move(mats));
}
}  // namespace

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::Hello: return "HELLO";
    case MsgType::Share: return "SHARE";
    case MsgType::Cipher: return "CIPHER";
    case MsgType::Envelope: return "ENVELOPE";
    case MsgType::Error: return "ERROR";
  }
  return "UNKNOWN";
}

Bytes encode_frame(const WireFrame& frame) {
  ByteWriter out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  out.raw(kMagic);
  out.u8(kWireVersion);
  out.u8(static_cast<std::uint8_t>(frame.type));
  out.u64le(frame.payload.size());
  out.raw(frame.payload);
  return std::move(out).take();
}

FrameHeader decode_frame_header(ByteView header, std::uint64_t max_payload) {
  ByteReader in(header);
  if (!std::equal(std::begin(kMagic), std::end(kMagic), in.raw(4).begin())) throw DecodingError("bad frame magic");
  if (in.u8() != kWireVersion) throw DecodingError("unsupported frame version");
  const std::uint8_t type = in.u8();
  if (!known_type(type)) throw DecodingError("unknown frame type");
  const std::uint64_t length = in.u64le();
  if (length > max_payload) throw DecodingError("frame payload exceeds maximum size");
  return {static_cast<MsgType>(type), length};
}

WireFrame decode_frame(ByteView data, std::uint64_t max_payload) {
  if (data.size() < kFrameHeaderBytes) throw DecodingError("truncated frame header");
  const FrameHeader h = decode_frame_header(data.first(kFrameHeaderBytes), max_payload);
  if (data.size() - kFrameHeaderBytes != h.length) throw DecodingError("frame length field does not match payload");
  auto body = data.subspan(kFrameHeaderBytes);
  return {h.type, Bytes(body.begin(), body.end())};
}

Bytes encode_hello(const ParamSet& params) {
  ByteWriter out;
  out.u64le(params.p());
  out.u32le(params.rows_a());
  out.u32le(params.columns_a());
  out.u32le(params.cycles());
  out.u8(static_cast<std::uint8_t>(params.hash()));
  return std::move(out).take();
}

ParamSet decode_hello(ByteView data) {
  ByteReader in(data);
  const std::uint64_t p = in.u64le();
  const std::uint32_t rows = in.u32le();
  const std::uint32_t cols = in.u32le();
  const std::uint32_t t = in.u32le();
  const std::uint8_t hash = in.u8();
  in.expect_end("HELLO");
  try {
    return ParamSet(PrimeModulus(p), rows, cols, t, static_cast<HashId>(hash));
  } catch (const InvalidArgument& e) {
    throw DecodingError(std::string("HELLO carries invalid parameters: ") + e.what());
  }
}

Bytes encode_share(const PublicShare& share) {
  ByteWriter out;
  const auto& mats = share.mats();
  std::size_t total = 4;
  for (const auto& m : mats) total += 8 + 8 * m.entries().size();
  out.reserve(total);
  out.u32le(static_cast<std::uint32_t>(mats.size()));
  for (const auto& m : mats) write_matrix(out, m);
  return std::move(out).take();
}

PublicShare decode_share(ByteView data, const ParamSet& params) {
  ByteReader in(data);
  PublicShare share = read_share(in, params);
  in.expect_end("share");
  return share;
}

Bytes encode_ciphertext(const CipherText& ct) {
  Bytes out = encode_share(ct.c);
  out.insert(out.end(), ct.d.begin(), ct.d.end());
  return out;
}

CipherText decode_ciphertext(ByteView data, const ParamSet& params) {
  ByteReader in(data);
  PublicShare c = read_share(in, params);
  CipherBlock d{};
  auto raw = in.raw(kCipherBlock);
  std::copy(raw.begin(), raw.end(), d.begin());
  in.expect_end("ciphertext");
  return {std::move(c), d};
}

}  // namespace rkex
