#pragma once

#include "rkex/bytes.hpp"

namespace rkex {

Digest512 sha3_512(ByteView data);

/// HMAC over SHA3-512; the inner block is the 72-byte sponge rate.
Digest512 hmac_sha3_512(ByteView key, ByteView data);

/// Equality without data-dependent early exit. Unequal lengths compare false.
bool constant_time_equal(ByteView a, ByteView b);

}  // namespace rkex
