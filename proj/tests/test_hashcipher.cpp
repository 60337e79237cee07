#include <doctest.h>

#include "fixtures.hpp"
#include "rkex/error.hpp"
#include "rkex/hash.hpp"
#include "rkex/hashcipher.hpp"

using namespace rkex;

TEST_CASE("pad_message") {
  const auto block = pad_message("abc");
  CHECK(block[0] == 'a');
  CHECK(block[3] == ' ');
  CHECK(block[63] == ' ');
  CHECK_NOTHROW(pad_message(std::string(64, 'x')));
  CHECK_THROWS_AS(pad_message(std::string(65, 'x')), InvalidArgument);
}

TEST_CASE("toy ciphertext D and recovery") {
  const auto msg = pad_message(fixtures::kPlaintext);
  const CipherText ct = encrypt(fixtures::bob_secret(), fixtures::alice_share(), fixtures::bob_share(), msg);
  CHECK(std::vector<std::uint8_t>(ct.d.begin(), ct.d.end()) == fixtures::kCipherD);
  CHECK(ct.c == fixtures::bob_share());

  CipherText received{fixtures::bob_share(), {}};
  std::copy(fixtures::kCipherD.begin(), fixtures::kCipherD.end(), received.d.begin());
  const CipherBlock plain = decrypt(fixtures::alice_secret(), received);
  CHECK(std::string(plain.begin(), plain.end()) == fixtures::kPlaintext + std::string(64 - 31, ' '));
}

TEST_CASE("fresh and reused key paths agree") {
  const auto msg = pad_message("reuse");
  const SessionKey key = derive_session_key(fixtures::bob_secret(), fixtures::alice_share());
  CHECK(encrypt(fixtures::bob_secret(), fixtures::alice_share(), fixtures::bob_share(), msg) ==
        encrypt_with_key(key, fixtures::bob_share(), msg));
}

TEST_CASE("zero message exposes the raw digest") {
  const CipherBlock zero{};
  const CipherText ct = encrypt(fixtures::bob_secret(), fixtures::alice_share(), fixtures::bob_share(), zero);
  const Digest512 d = sha3_512(as_bytes("32072121"));
  CHECK(std::equal(ct.d.begin(), ct.d.end(), d.begin()));
}

TEST_CASE("bit flips in D flip exactly that plaintext bit") {
  const auto msg = pad_message(fixtures::kPlaintext);
  const CipherText ct = encrypt(fixtures::bob_secret(), fixtures::alice_share(), fixtures::bob_share(), msg);
  for (std::size_t bit = 0; bit < 512; ++bit) {
    CipherText tampered = ct;
    tampered.d[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CipherBlock expected = msg;
    expected[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    CHECK(decrypt(fixtures::alice_secret(), tampered) == expected);
  }
}

TEST_CASE("roundtrip, distinct keystreams and d != msg over random sessions") {
  InsecureTestRandom rng(77);
  const ParamSet params(PrimeModulus(2147483647), 5, 4, 2);
  CipherBlock fixed{};
  fixed.fill('A');
  std::vector<CipherBlock> ds;
  for (int trial = 0; trial < 100; ++trial) {
    const Session alice = new_session(params, rng);
    const Session bob = new_session(params, rng);
    CipherBlock msg{};
    rng.fill(msg);
    const CipherText ct = encrypt(bob.secret, alice.share, bob.share, msg);
    CHECK(decrypt(alice.secret, ct) == msg);
    CHECK(ct.d != msg);
    ds.push_back(encrypt(bob.secret, alice.share, bob.share, fixed).d);
  }
  std::sort(ds.begin(), ds.end());
  CHECK(std::adjacent_find(ds.begin(), ds.end()) == ds.end());
}

TEST_CASE("parameter mismatch is rejected") {
  SecureRandom rng;
  const Session other = new_session(ParamSet(fixtures::kToyP, 4, 2, 2), rng);
  CHECK_THROWS_AS(encrypt(fixtures::bob_secret(), fixtures::alice_share(), other.share, pad_message("x")),
                  InvalidArgument);
  CHECK_THROWS_AS(decrypt(fixtures::alice_secret(), CipherText{other.share, {}}), InvalidArgument);
}
