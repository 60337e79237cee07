#include <doctest.h>

#include "fixtures.hpp"
#include "rkex/error.hpp"
#include "rkex/random.hpp"
#include "rkex/wire.hpp"

using namespace rkex;

namespace {

Bytes header_bytes(std::uint8_t version, std::uint8_t type, std::uint64_t len) {
  ByteWriter w;
  w.raw(as_bytes("RKEX"));
  w.u8(version);
  w.u8(type);
  w.u64le(len);
  return std::move(w).take();
}

}  // namespace

TEST_CASE("frame layout") {
  const Bytes f = encode_frame({MsgType::Share, {0xaa, 0xbb}});
  CHECK(to_hex(f) == "524b4558" "01" "02" "0200000000000000" "aabb");
  CHECK(decode_frame(f) == WireFrame{MsgType::Share, {0xaa, 0xbb}});
  CHECK(encode_frame({MsgType::Error, {}}).size() == kFrameHeaderBytes);
}

TEST_CASE("frame roundtrip over random payloads") {
  InsecureTestRandom rng(41);
  const MsgType types[] = {MsgType::Hello, MsgType::Share, MsgType::Cipher, MsgType::Envelope, MsgType::Error};
  for (int i = 0; i < 500; ++i) {
    Bytes payload(rng.uniform_below(2000));
    rng.fill(payload);
    const WireFrame frame{types[rng.uniform_below(5)], payload};
    CHECK(decode_frame(encode_frame(frame)) == frame);
  }
}

TEST_CASE("frame header rejects bad magic, version, type and length") {
  CHECK_NOTHROW(decode_frame_header(header_bytes(1, 4, 10)));
  Bytes bad_magic = header_bytes(1, 1, 0);
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_frame_header(bad_magic), DecodingError);
  CHECK_THROWS_AS(decode_frame_header(header_bytes(2, 1, 0)), DecodingError);
  for (std::uint8_t t : {0, 5, 0x7e, 0x80, 0xff}) CHECK_THROWS_AS(decode_frame_header(header_bytes(1, t, 0)), DecodingError);
  CHECK_NOTHROW(decode_frame_header(header_bytes(1, 2, kDefaultMaxPayload)));
  CHECK_THROWS_AS(decode_frame_header(header_bytes(1, 2, kDefaultMaxPayload + 1)), DecodingError);
  CHECK_THROWS_AS(decode_frame_header(header_bytes(1, 2, 100), 99), DecodingError);

  const Bytes good = encode_frame({MsgType::Hello, Bytes(21, 0)});
  CHECK_THROWS_AS(decode_frame(ByteView(good).first(good.size() - 1)), DecodingError);
  Bytes longer = good;
  longer.push_back(0);
  CHECK_THROWS_AS(decode_frame(longer), DecodingError);
  CHECK_THROWS_AS(decode_frame(ByteView(good).first(5)), DecodingError);
}

TEST_CASE("hello encoding") {
  const ParamSet params = ParamSet::parse("2147483647,20,19,10");
  const Bytes hello = encode_hello(params);
  CHECK(hello.size() == kHelloBytes);
  CHECK(to_hex(hello) == "ffffff7f00000000" "14000000" "13000000" "0a000000" "01");
  CHECK(decode_hello(hello) == params);

  Bytes bad = hello;
  bad[20] = 2;  // unknown hash id
  CHECK_THROWS_AS(decode_hello(bad), DecodingError);
  bad = hello;
  bad[0] = 0xfe;  // even modulus
  CHECK_THROWS_AS(decode_hello(bad), DecodingError);
  bad = hello;
  bad[12] = 0x14;  // columnsA == rowsA
  CHECK_THROWS_AS(decode_hello(bad), DecodingError);
  bad = hello;
  bad[16] = 0;  // t = 0
  CHECK_THROWS_AS(decode_hello(bad), DecodingError);
  CHECK_THROWS_AS(decode_hello(ByteView(hello).first(20)), DecodingError);
}

TEST_CASE("share encoding") {
  const ParamSet tiny = ParamSet::parse("7,2,1,1");
  const PublicShare zero(tiny, {ZpMatrix(2, 2, tiny.modulus())});
  const Bytes enc = encode_share(zero);
  CHECK(enc.size() == 44);
  CHECK(to_hex(ByteView(enc).first(12)) == "01000000" "02000000" "02000000");
  CHECK(decode_share(enc, tiny) == zero);

  const PublicShare toy = fixtures::alice_share();
  CHECK(decode_share(encode_share(toy), fixtures::toy_params()) == toy);

  InsecureTestRandom rng(42);
  for (int i = 0; i < 50; ++i) {
    const ParamSet params(PrimeModulus(2147483647), 2 + static_cast<std::uint32_t>(rng.uniform_below(7)), 1,
                          1 + static_cast<std::uint32_t>(rng.uniform_below(4)));
    const PublicShare s = new_session(params, rng).share;
    CHECK(decode_share(encode_share(s), params) == s);
  }
}

TEST_CASE("share decoding rejects inconsistent input") {
  const ParamSet params = fixtures::toy_params();
  const Bytes good = encode_share(fixtures::alice_share());

  Bytes wrong_count = good;
  wrong_count[0] = 3;
  CHECK_THROWS_AS(decode_share(wrong_count, params), DecodingError);
  wrong_count[0] = 1;
  CHECK_THROWS_AS(decode_share(wrong_count, params), DecodingError);

  Bytes big_entry = good;
  // First entry of the first matrix sits after count(4) rows(4) cols(4).
  for (int i = 0; i < 8; ++i) big_entry[12 + i] = 0;
  big_entry[12] = 0xb7;  // 5303 = 0x14b7
  big_entry[13] = 0x14;
  CHECK_THROWS_AS(decode_share(big_entry, params), DecodingError);
  big_entry[12] = 0xb6;
  CHECK_NOTHROW(decode_share(big_entry, params));

  Bytes wrong_dims = good;
  wrong_dims[4] = 2;
  CHECK_THROWS_AS(decode_share(wrong_dims, params), DecodingError);

  Bytes huge_dims = good;
  huge_dims[7] = 0x7f;
  CHECK_THROWS_AS(decode_share(huge_dims, params), DecodingError);

  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{11}, good.size() - 1}) {
    CHECK_THROWS_AS(decode_share(ByteView(good).first(cut), params), DecodingError);
  }
  Bytes trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_share(trailing, params), DecodingError);
}

TEST_CASE("ciphertext encoding") {
  CipherText ct{fixtures::alice_share(), {}};
  std::copy(fixtures::kCipherD.begin(), fixtures::kCipherD.end(), ct.d.begin());
  const Bytes enc = encode_ciphertext(ct);
  CHECK(enc.size() == encode_share(ct.c).size() + 64);
  const CipherText back = decode_ciphertext(enc, fixtures::toy_params());
  CHECK(back.c == ct.c);
  CHECK(back.d == ct.d);
  CHECK_THROWS_AS(decode_ciphertext(ByteView(enc).first(enc.size() - 1), fixtures::toy_params()), DecodingError);
}

TEST_CASE("decoders only throw DecodingError on mutated input") {
  InsecureTestRandom rng(43);
  const ParamSet params = fixtures::toy_params();
  CipherText ct{fixtures::bob_share(), {}};
  const std::vector<Bytes> seeds = {encode_frame({MsgType::Hello, encode_hello(params)}),
                                    encode_frame({MsgType::Share, encode_share(fixtures::alice_share())}),
                                    encode_frame({MsgType::Cipher, encode_ciphertext(ct)})};
  for (int i = 0; i < 3000; ++i) {
    Bytes m = seeds[rng.uniform_below(seeds.size())];
    const int edits = 1 + static_cast<int>(rng.uniform_below(4));
    for (int e = 0; e < edits; ++e) {
      switch (rng.uniform_below(3)) {
        case 0: m[rng.uniform_below(m.size())] ^= static_cast<std::uint8_t>(1 + rng.uniform_below(255)); break;
        case 1: m.resize(rng.uniform_below(m.size() + 1)); break;
        default: m.push_back(static_cast<std::uint8_t>(rng.uniform_below(256))); break;
      }
      if (m.empty()) m.push_back(0);
    }
    try {
      const WireFrame f = decode_frame(m);
      switch (f.type) {
        case MsgType::Hello: decode_hello(f.payload); break;
        case MsgType::Share: decode_share(f.payload, params); break;
        case MsgType::Cipher: decode_ciphertext(f.payload, params); break;
        default: break;
      }
    } catch (const DecodingError&) {
    } catch (const InvalidArgument&) {
    }
  }
  CHECK(true);
}
