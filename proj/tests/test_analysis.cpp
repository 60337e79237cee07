#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rkex/analysis.hpp"
#include "rkex/error.hpp"

using namespace rkex;

namespace {

struct TableCell {
  std::uint64_t p;
  std::uint32_t rows, cols, t;
  int bits;
};

// Reference complexity cells, in bits.
const TableCell kTable[] = {
    {2147483647ull, 5, 4, 10, 72},   {2147483647ull, 5, 4, 20, 73},   {2147483647ull, 5, 4, 100, 75},
    {2147483647ull, 6, 5, 10, 73},   {2147483647ull, 6, 5, 20, 74},   {2147483647ull, 6, 5, 100, 76},
    {2147483647ull, 20, 19, 10, 80}, {2147483647ull, 20, 19, 20, 81}, {2147483647ull, 20, 19, 100, 84},
    {2147483647ull, 100, 99, 10, 89}, {2147483647ull, 100, 99, 20, 91}, {2147483647ull, 100, 99, 100, 93},
    {18446744073709551113ull, 5, 4, 10, 138}, {18446744073709551113ull, 6, 5, 10, 139},
    {18446744073709551113ull, 20, 19, 10, 146}, {18446744073709551113ull, 100, 99, 10, 156},
};

// Counts exact factorizations by plain nested enumeration, independent of
// the library's odometer.
std::size_t count_factorizations_2x1(const ZpMatrix& u) {
  const std::uint64_t p = u.modulus().value(), lo = (p - 1) / 2;
  std::size_t n = 0;
  for (std::uint64_t a0 = lo; a0 < p; ++a0)
    for (std::uint64_t a1 = lo; a1 < p; ++a1)
      for (std::uint64_t b0 = lo; b0 < p; ++b0)
        for (std::uint64_t b1 = lo; b1 < p; ++b1) {
          const auto prod = oracles::naive_mul({{a0}, {a1}}, {{b0, b1}}, p);
          if (prod[0][0] == u.at(0, 0) && prod[0][1] == u.at(0, 1) && prod[1][0] == u.at(1, 0) &&
              prod[1][1] == u.at(1, 1))
            ++n;
        }
  return n;
}

}  // namespace

TEST_CASE("complexity_estimate reproduces the published table within one bit") {
  for (const auto& cell : kTable) {
    const ComplexityReport r = complexity_estimate(ParamSet(PrimeModulus(cell.p), cell.rows, cell.cols, cell.t));
    CAPTURE(cell.rows);
    CAPTURE(cell.t);
    CHECK(std::abs(r.bits - cell.bits) <= 1.0);
    CHECK(std::abs(r.bits - std::log2(r.raw.convert_to<double>())) < 1e-9);
  }
}

TEST_CASE("complexity_estimate trivial case and exact fields") {
  const ComplexityReport r = complexity_estimate(ParamSet(PrimeModulus(3), 2, 1, 1));
  CHECK(r.q == 1);
  CHECK(r.ndim == 2);
  CHECK(r.raw == 4);
  CHECK(r.bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(approx_power(complexity_estimate(ParamSet::parse("2147483647,5,4,10")).bits) == "≈2^72");

  const ComplexityReport big = complexity_estimate(ParamSet::parse("18446744073709551113,100,99,10"));
  boost::multiprecision::cpp_int expected = boost::multiprecision::cpp_int(9900) * 9223372036854775556ull;
  expected = expected * expected * 10;
  CHECK(big.raw == expected);
}

TEST_CASE("worked example with ndim = 100 x 90 follows the formula") {
  // The prose example states ~2^74; the formula gives ~2^89.6.
  const ComplexityReport r = complexity_estimate(ParamSet::parse("2147483647,100,90,10"));
  CHECK(r.bits == doctest::Approx(89.5933).epsilon(1e-4));
}

TEST_CASE("candidate count is (q+1)^(2*ndim)") {
  CHECK(attack_candidate_count(ParamSet::parse("7,2,1,1")) == 256);
  CHECK(attack_candidate_count(ParamSet::parse("5,3,1,1")) == 729);
  CHECK(attack_candidate_count(ParamSet::parse("2147483647,100,99,10")) == ~static_cast<unsigned __int128>(0));
}

TEST_CASE("brute force finds the planted factorization at p = 7") {
  const ParamSet params = ParamSet::parse("7,2,1,1");
  InsecureTestRandom rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Session s = new_session(params, rng);
    const ZpMatrix& u = s.share.mats()[0];
    const AttackResult r = brute_force_factor(u, params);
    CHECK(r.tried == 256);
    bool planted = false;
    for (const auto& m : r.matches) {
      CHECK(mat_mul_mod(m.a, m.b) == u);
      for (auto e : m.a.entries()) CHECK(e >= 3);
      for (auto e : m.b.entries()) CHECK(e >= 3);
      planted = planted || (m.a == s.secret.pairs()[0].a && m.b == s.secret.pairs()[0].b);
    }
    CHECK(planted);
    CHECK(r.matches.size() == count_factorizations_2x1(u));
  }
}

TEST_CASE("parallel enumeration merges in index order") {
  const ParamSet params = ParamSet::parse("11,3,1,1");  // 6^6 = 46656 candidates
  SecureRandom rng;
  const Session s = new_session(params, rng);
  AttackOptions serial, parallel;
  parallel.workers = 4;
  const AttackResult a = brute_force_factor(s.share.mats()[0], params, serial);
  const AttackResult b = brute_force_factor(s.share.mats()[0], params, parallel);
  CHECK(a.tried == b.tried);
  REQUIRE(a.matches.size() == b.matches.size());
  for (std::size_t i = 0; i < a.matches.size(); ++i) {
    CHECK(a.matches[i].a == b.matches[i].a);
    CHECK(a.matches[i].b == b.matches[i].b);
  }
}

TEST_CASE("budget guard refuses oversized searches") {
  const ParamSet params = ParamSet::parse("7,2,1,1");
  SecureRandom rng;
  const Session s = new_session(params, rng);
  AttackOptions opts;
  opts.budget = 255;
  try {
    brute_force_factor(s.share.mats()[0], params, opts);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.required() == 256);
  }
  const ParamSet real = ParamSet::parse("2147483647,5,4,10");
  const Session big = new_session(real, rng);
  CHECK_THROWS_AS(brute_force_factor(big.share.mats()[0], real), BudgetExceeded);
}

TEST_CASE("end-to-end toy attack recovers the session component") {
  const ParamSet params = ParamSet::parse("7,2,1,1");
  InsecureTestRandom rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Session victim = new_session(params, rng);
    const Session counterpart = new_session(params, rng);
    const SessionKey truth = derive_session_key(victim.secret, counterpart.share);
    const SessionAttack attack = attack_session(victim.share, counterpart.share);
    CHECK(attack.tried == 256);
    const auto& comps = attack.candidate_components[0];
    CHECK(std::find(comps.begin(), comps.end(), truth.components[0]) != comps.end());
  }
}

TEST_CASE("singularity audit") {
  const AuditReport toy = singularity_audit(fixtures::alice_share());
  REQUIRE(toy.matrices.size() == 2);
  CHECK(toy.matrices[0].det == 0);
  CHECK(toy.matrices[0].rank <= 2);
  CHECK(toy.passed());

  const PublicShare fake(fixtures::toy_params(),
                         {ZpMatrix::identity(3, fixtures::kToyP), fixtures::alice_share().mats()[1]});
  const AuditReport flagged = singularity_audit(fake);
  CHECK_FALSE(flagged.passed());
  CHECK_FALSE(flagged.matrices[0].passed());
  CHECK(flagged.matrices[0].det == 1);
  CHECK(flagged.matrices[1].passed());

  SecureRandom rng;
  for (int i = 0; i < 100; ++i) CHECK(singularity_audit(new_session(ParamSet::parse("101,6,3,2"), rng).share).passed());
}

TEST_CASE("bench_kep smoke and superlinear growth") {
  InsecureTestRandom rng(33);
  const BenchReport toy = bench_kep(ParamSet::parse("7,2,1,1"), 1, rng);
  CHECK(toy.mean_ms > 0);
  CHECK(toy.stddev_ms == 0);
  CHECK(toy.repetitions == 1);

  const BenchReport small = bench_kep(ParamSet::parse("2147483647,10,9,4"), 3, rng);
  const BenchReport large = bench_kep(ParamSet::parse("2147483647,40,39,4"), 3, rng);
  CHECK(large.complexity_bits > small.complexity_bits);
  // 4x the dimension; linear growth would be a ratio of 4.
  CHECK(large.mean_ms / small.mean_ms > 4.0);
  CHECK_THROWS_AS(bench_kep(ParamSet::parse("7,2,1,1"), 0, rng), InvalidArgument);
}

TEST_CASE("report formatting") {
  InsecureTestRandom rng(34);
  const std::string csv = format_bench({bench_kep(ParamSet::parse("2147483647,5,4,10"), 2, rng)}, true);
  CHECK(csv.rfind("rowsA,columnsA,cycles,complexity_bits,mean_ms,stddev_ms\n5,4,10,71.966,", 0) == 0);
  const std::string text = format_estimates({complexity_estimate(ParamSet::parse("2147483647,5,4,10"))}, false);
  CHECK(text.find("≈2^72") != std::string::npos);
  const std::string audit = format_audit({singularity_audit(fixtures::alice_share())}, true);
  CHECK(audit == "session,cycle,det,rank,rank_bound,passed\n1,1,0,2,2,true\n1,2,0,2,2,true\n");
  CHECK(published_table_params().size() == 16);
}
