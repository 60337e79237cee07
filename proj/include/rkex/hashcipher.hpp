#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "rkex/kep.hpp"

namespace rkex {

inline constexpr std::size_t kCipherBlock = 64;
using CipherBlock = std::array<std::uint8_t, kCipherBlock>;

/// (C, D): the sender's public share and the masked 64-byte message.
struct CipherText {
  PublicShare c;
  CipherBlock d;

  friend bool operator==(const CipherText&, const CipherText&) = default;
};

/// Right-pads text with ASCII spaces to 64 bytes; throws if it is longer.
CipherBlock pad_message(std::string_view text);

/// Computes the key from the received share, then D = SHA3-512(concat) XOR msg
/// and C = own_share.
CipherText encrypt(const PartySecret& secret, const PublicShare& received_share,
                   const PublicShare& own_share, const CipherBlock& msg);

/// Same ciphertext as encrypt() when the key was already derived.
CipherText encrypt_with_key(const SessionKey& key, const PublicShare& own_share,
                            const CipherBlock& msg);

CipherBlock decrypt(const PartySecret& secret, const CipherText& ct);

}  // namespace rkex
