#include "rkex/zpmath.hpp"

#include <string>
#include <utility>

#include "rkex/error.hpp"

namespace rkex {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto q : kSmall) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes as witnesses decide primality for all n < 2^64.
  for (auto a : kSmall) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p), small_(p <= UINT32_MAX) {
  if (p < 3 || (p & 1) == 0 || !is_prime_u64(p)) {
    throw InvalidArgument("modulus " + std::to_string(p) + " is not an odd prime");
  }
}

std::uint64_t PrimeModulus::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t result = 1;
  base %= p_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t PrimeModulus::inverse(std::uint64_t a) const {
  if (a % p_ == 0) throw InvalidArgument("zero has no inverse");
  // Extended Euclid on signed 128-bit values; the Bezout coefficients stay
  // below p in magnitude.
  __int128 old_r = p_, r = a % p_;
  __int128 old_s = 0, s = 1;
  while (r != 0) {
    const __int128 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
  }
  if (old_s < 0) old_s += p_;
  return static_cast<std::uint64_t>(old_s);
}

ZpMatrix::ZpMatrix(std::size_t rows, std::size_t cols, PrimeModulus p)
    : rows_(rows), cols_(cols), p_(p) {
  if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
  entries_.assign(rows * cols, 0);
}

ZpMatrix::ZpMatrix(std::size_t rows, std::size_t cols, PrimeModulus p,
                   std::vector<std::uint64_t> entries)
    : rows_(rows), cols_(cols), p_(p), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
  if (entries_.size() != rows * cols) throw InvalidArgument("entry count does not match dimensions");
  for (auto e : entries_) {
    if (e >= p_.value()) throw InvalidArgument("matrix entry not reduced mod p");
  }
}

ZpMatrix ZpMatrix::identity(std::size_t n, PrimeModulus p) {
  ZpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

void ZpMatrix::set(std::size_t i, std::size_t j, std::uint64_t v) {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
  if (v >= p_.value()) throw InvalidArgument("matrix entry not reduced mod p");
  entries_[i * cols_ + j] = v;
}

ZpMatrix sample_matrix(std::size_t rows, std::size_t cols, const PrimeModulus& p,
                       RandomSource& rng) {
  if (rows == 0 || cols == 0) throw InvalidArgument("sample_matrix: dimensions must be positive");
  std::vector<std::uint64_t> entries(rows * cols);
  for (auto& e : entries) e = rng.uniform_closed(p.half(), p.value() - 1);
  return ZpMatrix(rows, cols, p, std::move(entries));
}

ZpMatrix transpose(const ZpMatrix& m) {
  std::vector<std::uint64_t> out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[j * m.rows() + i] = m.at(i, j);
  }
  return ZpMatrix(m.cols(), m.rows(), m.modulus(), std::move(out));
}

ZpMatrix mat_mul_mod(const ZpMatrix& a, const ZpMatrix& b) {
  if (!(a.modulus() == b.modulus())) throw InvalidArgument("mat_mul_mod: modulus mismatch");
  if (a.cols() != b.rows()) throw InvalidArgument("mat_mul_mod: dimension mismatch");
  const std::uint64_t p = a.modulus().value();
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  const ZpMatrix bt = transpose(b);
  std::vector<std::uint64_t> out(n * m);

  if (p <= UINT32_MAX) {
    // Each product is below 2^64, so a 128-bit accumulator cannot overflow
    // for any realistic inner dimension; reduce once per entry.
    for (std::size_t i = 0; i < n; ++i) {
      const auto arow = a.row(i);
      for (std::size_t j = 0; j < m; ++j) {
        const auto bcol = bt.row(j);
        u128 acc = 0;
        for (std::size_t k = 0; k < inner; ++k) acc += arow[k] * bcol[k];
        out[i * m + j] = static_cast<std::uint64_t>(acc % p);
      }
    }
  } else {
    // Products need 128 bits; reduce each one before accumulating.
    for (std::size_t i = 0; i < n; ++i) {
      const auto arow = a.row(i);
      for (std::size_t j = 0; j < m; ++j) {
        const auto bcol = bt.row(j);
        u128 acc = 0;
        for (std::size_t k = 0; k < inner; ++k) acc += static_cast<u128>(arow[k]) * bcol[k] % p;
        out[i * m + j] = static_cast<std::uint64_t>(acc % p);
      }
    }
  }
  return ZpMatrix(n, m, a.modulus(), std::move(out));
}

namespace {

struct Elimination {
  std::uint64_t det;
  std::size_t rank;
};

// Row-echelon reduction over Z_p. For square input `det` is the determinant;
// for rectangular input it is meaningless and callers ignore it.
Elimination eliminate(const ZpMatrix& m) {
  const PrimeModulus& field = m.modulus();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::uint64_t> a(m.entries().begin(), m.entries().end());
  auto cell = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return a[i * cols + j]; };

  std::uint64_t det = 1;
  bool negate = false;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && cell(pivot, col) == 0) ++pivot;
    if (pivot == rows) {
      det = 0;
      continue;
    }
    if (pivot != rank) {
      for (std::size_t j = col; j < cols; ++j) std::swap(cell(pivot, j), cell(rank, j));
      negate = !negate;
    }
    const std::uint64_t pv = cell(rank, col);
    det = field.mul(det, pv);
    const std::uint64_t inv = field.inverse(pv);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (cell(r, col) == 0) continue;
      const std::uint64_t factor = field.mul(cell(r, col), inv);
      for (std::size_t j = col; j < cols; ++j) {
        cell(r, j) = field.sub(cell(r, j), field.mul(factor, cell(rank, j)));
      }
    }
    ++rank;
  }
  if (rank < rows) det = 0;
  if (negate && det != 0) det = field.value() - det;
  return {det, rank};
}

}  // namespace

std::uint64_t det_mod(const ZpMatrix& m) {
  if (!m.is_square()) throw InvalidArgument("det_mod: matrix is not square");
  return eliminate(m).det;
}

std::size_t rank_mod(const ZpMatrix& m) { return eliminate(m).rank; }

void write_matrix(ByteWriter& out, const ZpMatrix& m) {
  out.u32le(static_cast<std::uint32_t>(m.rows()));
  out.u32le(static_cast<std::uint32_t>(m.cols()));
  for (auto e : m.entries()) out.u64le(e);
}

ZpMatrix read_matrix(ByteReader& in, const PrimeModulus& p) {
  const std::uint64_t rows = in.u32le();
  const std::uint64_t cols = in.u32le();
  if (rows == 0 || cols == 0) throw DecodingError("matrix with zero dimension");
  if (rows * cols > in.remaining() / 8) throw DecodingError("matrix entries truncated");
  std::vector<std::uint64_t> entries(rows * cols);
  for (auto& e : entries) {
    e = in.u64le();
    if (e >= p.value()) throw DecodingError("matrix entry out of range for modulus");
  }
  return ZpMatrix(rows, cols, p, std::move(entries));
}

}  // namespace rkex
