#pragma once

#include <filesystem>

#include "rkex/kep.hpp"

namespace rkex {

/// What a party keeps after an exchange to encrypt or decrypt later.
struct SessionState {
  ParamSet params;
  Digest512 digest;
  PartySecret secret;
};

/// "RKST" || version u8 || HELLO body || digest(64) || t x (A, B) matrices.
/// Written with owner-only permissions (0600).
void save_state(const std::filesystem::path& path, const SessionState& state);
SessionState load_state(const std::filesystem::path& path);

Bytes encode_state(const SessionState& state);
SessionState decode_state(ByteView data);

}  // namespace rkex
