#include "rkex/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "rkex/error.hpp"

namespace rkex {

using u128 = unsigned __int128;

ComplexityReport complexity_estimate(const ParamSet& params) {
  const std::uint64_t q = params.modulus().half();
  const std::uint64_t ndim = static_cast<std::uint64_t>(params.rows_a()) * params.columns_a();
  boost::multiprecision::cpp_int base = boost::multiprecision::cpp_int(ndim) * q;
  boost::multiprecision::cpp_int raw = base * base * params.cycles();
  const long double bits = 2.0L * (std::log2l(static_cast<long double>(ndim)) +
                                   std::log2l(static_cast<long double>(q))) +
                           std::log2l(static_cast<long double>(params.cycles()));
  return {params, q, ndim, std::move(raw), static_cast<double>(bits)};
}

std::string approx_power(double bits) {
  return "≈2^" + std::to_string(static_cast<long long>(std::llround(bits)));
}

unsigned __int128 attack_candidate_count(const ParamSet& params) {
  const u128 values = static_cast<u128>(params.modulus().half()) + 1;
  const std::uint64_t digits = 2ull * params.rows_a() * params.columns_a();
  const u128 max = ~static_cast<u128>(0);
  u128 total = 1;
  for (std::uint64_t i = 0; i < digits; ++i) {
    if (total > max / values) return max;
    total *= values;
  }
  return total;
}

namespace {

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

struct IndexedMatch {
  std::uint64_t index;
  Factorization f;
};

// Walks candidate indices [begin, end) with an odometer over the entry
// digits: A's entries first (row-major), then B's.
std::vector<IndexedMatch> scan_range(const ZpMatrix& u, const ParamSet& params,
                                     const std::optional<ZpMatrix>& counterpart,
                                     std::uint64_t begin, std::uint64_t end) {
  const PrimeModulus& field = params.modulus();
  const std::uint64_t lo = field.half();
  const std::uint64_t values = lo + 1;
  const std::size_t rows = params.rows_a(), cols = params.columns_a();
  const std::size_t ndim = rows * cols;

  std::vector<std::uint64_t> digits(2 * ndim);
  std::uint64_t idx = begin;
  for (auto& d : digits) {
    d = idx % values;
    idx /= values;
  }
  auto a_entry = [&](std::size_t i, std::size_t k) { return lo + digits[i * cols + k]; };
  auto b_entry = [&](std::size_t k, std::size_t j) { return lo + digits[ndim + k * rows + j]; };

  std::vector<IndexedMatch> found;
  for (std::uint64_t cand = begin; cand < end; ++cand) {
    bool equal = true;
    for (std::size_t i = 0; i < rows && equal; ++i) {
      for (std::size_t j = 0; j < rows; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < cols; ++k) acc = field.add(acc, field.mul(a_entry(i, k), b_entry(k, j)));
        if (acc != u.at(i, j)) {
          equal = false;
          break;
        }
      }
    }
    if (equal) {
      std::vector<std::uint64_t> ae(ndim), be(ndim);
      for (std::size_t n = 0; n < ndim; ++n) {
        ae[n] = lo + digits[n];
        be[n] = lo + digits[ndim + n];
      }
      Factorization f{ZpMatrix(rows, cols, field, std::move(ae)), ZpMatrix(cols, rows, field, std::move(be)),
                      std::nullopt};
      if (counterpart) {
        f.component = det_mod(mat_mul_mod(mat_mul_mod(transpose(f.a), *counterpart), transpose(f.b)));
      }
      found.push_back({cand, std::move(f)});
    }
    for (auto& d : digits) {
      if (++d < values) break;
      d = 0;
    }
  }
  return found;
}

}  // namespace

AttackResult brute_force_factor(const ZpMatrix& u, const ParamSet& params, const AttackOptions& opts) {
  if (!(u.modulus() == params.modulus())) throw InvalidArgument("attack target modulus differs from parameters");
  if (u.rows() != params.rows_a() || u.cols() != params.rows_a()) {
    throw InvalidArgument("attack target must be rowsA x rowsA");
  }
  if (opts.counterpart && (opts.counterpart->rows() != params.rows_a() ||
                           opts.counterpart->cols() != params.rows_a() ||
                           !(opts.counterpart->modulus() == params.modulus()))) {
    throw InvalidArgument("counterpart must be a rowsA x rowsA share matrix");
  }
  const u128 total = attack_candidate_count(params);
  if (total > opts.budget) {
    throw BudgetExceeded("brute force needs " + u128_to_string(total) + " candidates, budget is " +
                             std::to_string(opts.budget),
                         total);
  }
  const auto count = static_cast<std::uint64_t>(total);
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(
                                                                             std::min<std::uint64_t>(count, 64))));

  std::vector<std::vector<IndexedMatch>> partial(workers);
  if (workers == 1) {
    partial[0] = scan_range(u, params, opts.counterpart, 0, count);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(count, w * chunk);
      const std::uint64_t end = std::min(count, begin + chunk);
      threads.emplace_back([&, w, begin, end] { partial[w] = scan_range(u, params, opts.counterpart, begin, end); });
    }
    for (auto& t : threads) t.join();
  }

  std::vector<IndexedMatch> merged;
  for (auto& part : partial) std::move(part.begin(), part.end(), std::back_inserter(merged));
  std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.index < y.index; });

  AttackResult result;
  result.tried = count;
  for (auto& m : merged) result.matches.push_back(std::move(m.f));
  return result;
}

SessionAttack attack_session(const PublicShare& victim_share, const PublicShare& counterpart_share,
                             const AttackOptions& opts) {
  const ParamSet& params = victim_share.params();
  if (!(params == counterpart_share.params())) throw InvalidArgument("share parameters differ");
  const u128 per_cycle = attack_candidate_count(params);
  const u128 max = ~static_cast<u128>(0);
  const u128 total = per_cycle > max / params.cycles() ? max : per_cycle * params.cycles();
  if (total > opts.budget) {
    throw BudgetExceeded("session attack needs " + u128_to_string(total) + " candidates, budget is " +
                             std::to_string(opts.budget),
                         total);
  }
  SessionAttack out;
  for (std::size_t k = 0; k < params.cycles(); ++k) {
    AttackOptions cycle_opts = opts;
    cycle_opts.counterpart = counterpart_share.mats()[k];
    AttackResult r = brute_force_factor(victim_share.mats()[k], params, cycle_opts);
    std::set<std::uint64_t> comps;
    for (const auto& m : r.matches) comps.insert(*m.component);
    out.tried += r.tried;
    out.candidate_components.emplace_back(comps.begin(), comps.end());
    out.cycles.push_back(std::move(r));
  }
  return out;
}

bool AuditReport::passed() const {
  return std::all_of(matrices.begin(), matrices.end(), [](const MatrixAudit& m) { return m.passed(); });
}

AuditReport singularity_audit(const PublicShare& share) {
  AuditReport report;
  for (std::size_t k = 0; k < share.mats().size(); ++k) {
    const auto& m = share.mats()[k];
    report.matrices.push_back({k + 1, det_mod(m), rank_mod(m), share.params().columns_a()});
  }
  return report;
}

BenchReport bench_kep(const ParamSet& params, std::size_t repetitions, RandomSource& rng) {
  if (repetitions == 0) throw InvalidArgument("bench needs at least one repetition");
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };

  std::vector<double> totals;
  double share_sum = 0, derive_sum = 0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto t0 = clock::now();
    const Session alice = new_session(params, rng);
    const Session bob = new_session(params, rng);
    const auto t1 = clock::now();
    const SessionKey ka = derive_session_key(alice.secret, bob.share);
    const SessionKey kb = derive_session_key(bob.secret, alice.share);
    const auto t2 = clock::now();
    if (ka.digest != kb.digest) throw Error("benchmark run produced mismatched keys");
    share_sum += ms(t1 - t0);
    derive_sum += ms(t2 - t1);
    totals.push_back(ms(t2 - t0));
  }
  const double n = static_cast<double>(repetitions);
  double mean = 0;
  for (double t : totals) mean += t;
  mean /= n;
  double var = 0;
  for (double t : totals) var += (t - mean) * (t - mean);
  const double stddev = repetitions > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return {params, repetitions, complexity_estimate(params).bits, mean, stddev, share_sum / n, derive_sum / n};
}

std::vector<ParamSet> published_table_params() {
  const PrimeModulus p31(2147483647ull);
  const PrimeModulus p64(18446744073709551113ull);
  std::vector<ParamSet> out;
  for (auto [r, c] : {std::pair{5u, 4u}, {6u, 5u}, {20u, 19u}, {100u, 99u}}) {
    for (auto t : {10u, 20u, 100u}) out.emplace_back(p31, r, c, t);
  }
  for (auto [r, c] : {std::pair{5u, 4u}, {6u, 5u}, {20u, 19u}, {100u, 99u}}) out.emplace_back(p64, r, c, 10u);
  return out;
}

std::string format_bench(const std::vector<BenchReport>& rows, bool csv) {
  std::ostringstream os;
  os << std::fixed;
  if (csv) {
    os << "rowsA,columnsA,cycles,complexity_bits,mean_ms,stddev_ms\n";
    for (const auto& r : rows) {
      os << r.params.rows_a() << ',' << r.params.columns_a() << ',' << r.params.cycles() << ','
         << std::setprecision(3) << r.complexity_bits << ',' << r.mean_ms << ',' << r.stddev_ms << '\n';
    }
    return os.str();
  }
  os << std::setw(22) << "p" << std::setw(7) << "rowsA" << std::setw(9) << "columnsA" << std::setw(8)
     << "cycles" << std::setw(12) << "complexity" << std::setw(12) << "mean_ms" << std::setw(12) << "stddev_ms"
     << std::setw(12) << "share_ms" << std::setw(12) << "derive_ms" << '\n';
  for (const auto& r : rows) {
    os << std::setw(22) << r.params.p() << std::setw(7) << r.params.rows_a() << std::setw(9)
       << r.params.columns_a() << std::setw(8) << r.params.cycles() << std::setw(12)
       << ("~2^" + std::to_string(std::llround(r.complexity_bits))) << std::setprecision(3) << std::setw(12)
       << r.mean_ms << std::setw(12) << r.stddev_ms << std::setw(12) << r.share_mean_ms << std::setw(12)
       << r.derive_mean_ms << '\n';
  }
  return os.str();
}

std::string format_audit(const std::vector<AuditReport>& reports, bool csv) {
  std::ostringstream os;
  if (csv) {
    os << "session,cycle,det,rank,rank_bound,passed\n";
  } else {
    os << std::setw(8) << "session" << std::setw(7) << "cycle" << std::setw(22) << "det" << std::setw(7)
       << "rank" << std::setw(7) << "bound" << std::setw(8) << "result" << '\n';
  }
  for (std::size_t s = 0; s < reports.size(); ++s) {
    for (const auto& m : reports[s].matrices) {
      if (csv) {
        os << s + 1 << ',' << m.cycle << ',' << m.det << ',' << m.rank << ',' << m.rank_bound << ','
           << (m.passed() ? "true" : "false") << '\n';
      } else {
        os << std::setw(8) << s + 1 << std::setw(7) << m.cycle << std::setw(22) << m.det << std::setw(7)
           << m.rank << std::setw(7) << m.rank_bound << std::setw(8) << (m.passed() ? "ok" : "FAIL") << '\n';
      }
    }
  }
  return os.str();
}

std::string format_estimates(const std::vector<ComplexityReport>& rows, bool csv) {
  std::ostringstream os;
  if (csv) {
    os << "p,rowsA,columnsA,cycles,complexity_bits\n";
    for (const auto& r : rows) {
      os << r.params.p() << ',' << r.params.rows_a() << ',' << r.params.columns_a() << ','
         << r.params.cycles() << ',' << std::fixed << std::setprecision(3) << r.bits << '\n';
    }
    return os.str();
  }
  os << std::setw(22) << "p" << std::setw(7) << "rowsA" << std::setw(9) << "columnsA" << std::setw(8)
     << "cycles" << std::setw(10) << "log2" << "  complexity\n";
  for (const auto& r : rows) {
    os << std::setw(22) << r.params.p() << std::setw(7) << r.params.rows_a() << std::setw(9)
       << r.params.columns_a() << std::setw(8) << r.params.cycles() << std::setw(10) << std::fixed
       << std::setprecision(3) << r.bits << "  " << approx_power(r.bits) << '\n';
  }
  return os.str();
}

}  // namespace rkex
