#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rkex/bytes.hpp"
#include "rkex/random.hpp"
#include "rkex/zpmath.hpp"

namespace rkex {

enum class HashId : std::uint8_t { Sha3_512 = 0x01 };

/// Public configuration both parties agree on before an exchange.
/// A is rowsA x columnsA (tall); B is columnsA x rowsA (wide).
class ParamSet {
 public:
  /// Throws InvalidArgument unless rowsA > columnsA >= 1 and t >= 1.
  ParamSet(PrimeModulus p, std::uint32_t rows_a, std::uint32_t columns_a, std::uint32_t cycles,
           HashId hash = HashId::Sha3_512);

  /// Parses "p,rowsA,columnsA,t".
  static ParamSet parse(const std::string& text);

  /// Draws rowsA in [5, row_max] and columnsA in [4, rowsA - 1].
  static ParamSet random(PrimeModulus p, std::uint32_t cycles, RandomSource& rng,
                         std::uint32_t row_max = 100);

  const PrimeModulus& modulus() const { return p_; }
  std::uint64_t p() const { return p_.value(); }
  std::uint32_t rows_a() const { return rows_a_; }
  std::uint32_t columns_a() const { return columns_a_; }
  std::uint32_t rows_b() const { return columns_a_; }
  std::uint32_t columns_b() const { return rows_a_; }
  std::uint32_t cycles() const { return cycles_; }
  HashId hash() const { return hash_; }

  /// Human-readable notes for dimensions outside the recommended
  /// rowsA in [5, 100], columnsA in [4, rowsA - 1]. Never fatal.
  std::vector<std::string> advisories() const;

  std::string to_string() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  PrimeModulus p_;
  std::uint32_t rows_a_;
  std::uint32_t columns_a_;
  std::uint32_t cycles_;
  HashId hash_;
};

struct SecretPair {
  ZpMatrix a;  // rowsA x columnsA
  ZpMatrix b;  // columnsA x rowsA
};

/// One party's private matrices for a single session.
class PartySecret {
 public:
  /// Validates pair count and dimensions. Entries are not range-checked,
  /// so fixed test matrices outside [(p-1)/2, p-1] are accepted.
  PartySecret(ParamSet params, std::vector<SecretPair> pairs);

  const ParamSet& params() const { return params_; }
  const std::vector<SecretPair>& pairs() const { return pairs_; }

 private:
  ParamSet params_;
  std::vector<SecretPair> pairs_;
};

/// The transmitted vector of t square rowsA x rowsA matrices (U or V).
class PublicShare {
 public:
  PublicShare(ParamSet params, std::vector<ZpMatrix> mats);

  const ParamSet& params() const { return params_; }
  const std::vector<ZpMatrix>& mats() const { return mats_; }

  friend bool operator==(const PublicShare&, const PublicShare&) = default;

 private:
  ParamSet params_;
  std::vector<ZpMatrix> mats_;
};

struct SessionKey {
  std::vector<std::uint64_t> components;
  std::string concat;  // decimal components, no separators
  Digest512 digest;    // SHA3-512(concat)

  std::string hex() const { return to_hex(digest); }
};

struct Session {
  PartySecret secret;
  PublicShare share;
};

/// Samples a fresh secret and its public share.
Session new_session(const ParamSet& params, RandomSource& rng);

/// Public share for an existing secret: U_k = A_k * B_k mod p.
PublicShare compute_share(const PartySecret& secret);

/// Per-cycle key components det(A_k^T * other_k * B_k^T) mod p.
std::vector<std::uint64_t> derive_components(const PartySecret& secret,
                                             const PublicShare& other_share);

/// Concatenates components in minimal decimal and hashes with SHA3-512.
/// (1, 23) and (12, 3) both give "123"; this matches the published scheme.
SessionKey finalize_key(const std::vector<std::uint64_t>& components);

inline SessionKey derive_session_key(const PartySecret& secret, const PublicShare& other_share) {
  return finalize_key(derive_components(secret, other_share));
}

}  // namespace rkex
