#include "rkex/hashcipher.hpp"

#include <algorithm>

#include "rkex/error.hpp"

namespace rkex {

namespace {
CipherBlock mask(const Digest512& pad, const CipherBlock& block) {
  CipherBlock out{};
  for (std::size_t i = 0; i < kCipherBlock; ++i) out[i] = pad[i] ^ block[i];
  return out;
}
}  // namespace

CipherBlock pad_message(std::string_view text) {
  if (text.size() > kCipherBlock) throw InvalidArgument("message longer than 64 bytes");
  CipherBlock out{};
  out.fill(' ');
  std::copy(text.begin(), text.end(), out.begin());
  return out;
}

CipherText encrypt(const PartySecret& secret, const PublicShare& received_share,
                   const PublicShare& own_share, const CipherBlock& msg) {
  if (!(own_share.params() == secret.params())) {
    throw InvalidArgument("own share parameters differ from session parameters");
  }
  return encrypt_with_key(derive_session_key(secret, received_share), own_share, msg);
}

CipherText encrypt_with_key(const SessionKey& key, const PublicShare& own_share,
                            const CipherBlock& msg) {
  return CipherText{own_share, mask(key.digest, msg)};
}

CipherBlock decrypt(const PartySecret& secret, const CipherText& ct) {
  return mask(derive_session_key(secret, ct.c).digest, ct.d);
}

}  // namespace rkex
