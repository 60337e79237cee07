#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rkex/bytes.hpp"
#include "rkex/random.hpp"

namespace rkex {

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// An odd prime 3 <= p < 2^64, validated on construction.
class PrimeModulus {
 public:
  /// Throws InvalidArgument unless p is an odd prime.
  explicit PrimeModulus(std::uint64_t p);

  std::uint64_t value() const { return p_; }
  /// (p - 1) / 2, the lower end of the private sampling interval.
  std::uint64_t half() const { return (p_ - 1) / 2; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return (s < a || s >= p_) ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (small_) return (a * b) % p_;
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  /// Multiplicative inverse of a nonzero residue.
  std::uint64_t inverse(std::uint64_t a) const;

  friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
  bool small_;  // p < 2^32, so products fit in 64 bits
};

/// Rectangular matrix over Z_p, row-major, entries in [0, p).
class ZpMatrix {
 public:
  /// Zero matrix. rows and cols must be positive.
  ZpMatrix(std::size_t rows, std::size_t cols, PrimeModulus p);
  /// Takes row-major entries; throws if the count or any entry is out of range.
  ZpMatrix(std::size_t rows, std::size_t cols, PrimeModulus p, std::vector<std::uint64_t> entries);

  static ZpMatrix identity(std::size_t n, PrimeModulus p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const PrimeModulus& modulus() const { return p_; }

  std::uint64_t at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  /// Entry must already be reduced.
  void set(std::size_t i, std::size_t j, std::uint64_t v);

  std::span<const std::uint64_t> entries() const { return entries_; }
  std::span<const std::uint64_t> row(std::size_t i) const {
    return std::span<const std::uint64_t>(entries_).subspan(i * cols_, cols_);
  }

  friend bool operator==(const ZpMatrix& a, const ZpMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.p_ == b.p_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  PrimeModulus p_;
  std::vector<std::uint64_t> entries_;
};

/// Every entry independent and exactly uniform on [(p-1)/2, p-1].
ZpMatrix sample_matrix(std::size_t rows, std::size_t cols, const PrimeModulus& p, RandomSource& rng);

ZpMatrix mat_mul_mod(const ZpMatrix& a, const ZpMatrix& b);
ZpMatrix transpose(const ZpMatrix& m);

/// Determinant over the field Z_p by Gaussian elimination. Square input only.
std::uint64_t det_mod(const ZpMatrix& m);
/// Rank over Z_p by the same elimination.
std::size_t rank_mod(const ZpMatrix& m);

/// rows (u32 LE), cols (u32 LE), then rows*cols entries as u64 LE.
void write_matrix(ByteWriter& out, const ZpMatrix& m);
/// Inverse of write_matrix; rejects entries >= p and absurd dimensions.
ZpMatrix read_matrix(ByteReader& in, const PrimeModulus& p);

}  // namespace rkex
