#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkex/kep.hpp"

namespace rkex {

// ---- brute-force complexity -------------------------------------------------

struct ComplexityReport {
  ParamSet params;
  std::uint64_t q;     // (p - 1) / 2
  std::uint64_t ndim;  // rowsA * columnsA
  boost::multiprecision::cpp_int raw;  // (ndim * q)^2 * t
  double bits;                         // log2(raw)
};

/// The published brute-force bound (ndim * q)^2 * t. Note this is not the
/// size of the private keyspace, which is (q + 1)^(2 * ndim) per cycle.
ComplexityReport complexity_estimate(const ParamSet& params);

/// "≈2^N" with N = round(bits).
std::string approx_power(double bits);

// ---- toy-scale factorization oracle ------------------------------------------

inline constexpr std::uint64_t kDefaultAttackBudget = 100'000'000;

struct AttackOptions {
  std::uint64_t budget = kDefaultAttackBudget;
  /// Counterpart share matrix for the same cycle. When present every match
  /// also yields the key component det(A'^T * counterpart * B'^T).
  std::optional<ZpMatrix> counterpart;
  unsigned workers = 1;
};

struct Factorization {
  ZpMatrix a;
  ZpMatrix b;
  std::optional<std::uint64_t> component;
};

struct AttackResult {
  std::uint64_t tried = 0;
  std::vector<Factorization> matches;  // ordered by enumeration index
};

/// Number of (A, B) candidates with entries in [(p-1)/2, p-1]:
/// (q + 1)^(2 * ndim), saturating at 2^128 - 1.
unsigned __int128 attack_candidate_count(const ParamSet& params);

/// Enumerates every (A, B) in the sampling range and keeps those with
/// A * B = u mod p. Throws BudgetExceeded before doing any work when the
/// candidate count exceeds opts.budget.
AttackResult brute_force_factor(const ZpMatrix& u, const ParamSet& params,
                                const AttackOptions& opts = {});

struct SessionAttack {
  std::vector<AttackResult> cycles;
  std::uint64_t tried = 0;
  /// Per cycle, the distinct component values the matches produce.
  std::vector<std::vector<std::uint64_t>> candidate_components;
};

/// Factors every cycle of victim_share and evaluates the candidate
/// components against the counterpart share.
SessionAttack attack_session(const PublicShare& victim_share, const PublicShare& counterpart_share,
                             const AttackOptions& opts = {});

// ---- singularity audit -------------------------------------------------------

struct MatrixAudit {
  std::size_t cycle;
  std::uint64_t det;
  std::size_t rank;
  std::size_t rank_bound;  // columnsA
  bool passed() const { return det == 0 && rank <= rank_bound; }
};

struct AuditReport {
  std::vector<MatrixAudit> matrices;
  bool passed() const;
};

AuditReport singularity_audit(const PublicShare& share);

// ---- benchmark harness -------------------------------------------------------

struct BenchReport {
  ParamSet params;
  std::size_t repetitions;
  double complexity_bits;
  double mean_ms;
  double stddev_ms;
  double share_mean_ms;   // both parties' share generation
  double derive_mean_ms;  // both parties' key derivation + hash
};

/// Times complete two-party runs (both shares and both key derivations).
BenchReport bench_kep(const ParamSet& params, std::size_t repetitions, RandomSource& rng);

/// Rows of (rowsA, columnsA, cycles, p) reported in the published timing tables.
std::vector<ParamSet> published_table_params();

std::string format_bench(const std::vector<BenchReport>& rows, bool csv);
std::string format_audit(const std::vector<AuditReport>& reports, bool csv);
std::string format_estimates(const std::vector<ComplexityReport>& rows, bool csv);

}  // namespace rkex
