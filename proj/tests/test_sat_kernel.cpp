#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cnflab/error.hpp"
#include "cnflab/sat_kernel.hpp"
#include "support.hpp"
#include "incidence.hpp"

using namespace cnflab;

namespace {

std::vector<oracle::Lits> incidence_prefix(std::size_t k) {
  std::vector<oracle::Lits> out;
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(incidence::rows[i].lits);
  return out;
}

std::vector<std::size_t> as_positions(const std::vector<int>& idx) {
  return {idx.begin(), idx.end()};
}

} // namespace

TEST_CASE("printed examples") {
  const Formula first8 = make_formula(4, incidence_prefix(8));
  const Formula first9 = make_formula(4, incidence_prefix(9));
  const Formula t1 = make_formula(4, {{1, 2, -3}, {-2, 3, -4}, {-1, -3, 4}});
  CHECK(is_unsat_cover(first8));
  CHECK(is_unsat_bruteforce(first8));
  CHECK_FALSE(is_unsat_cover(t1));
  CHECK_FALSE(is_unsat_bruteforce(t1));
  // Its first two clauses hold under x1 = 1, x2 = 0 whatever x3, x4 are.
  const Formula two = make_formula(4, {{1, 2, -3}, {-2, 3, -4}});
  CHECK_FALSE(is_unsat_cover(two));
  for (std::uint64_t rest = 0; rest < 4; ++rest)
    for (const auto& c : two.clauses())
      CHECK(c.satisfied_by(1 | rest << 2));
  for (const auto& c : t1.clauses())
    CHECK(c.satisfied_by(1));

  const auto cert = ins_certificate(first8);
  REQUIRE(cert);
  CHECK(verify_certificate(first8, *cert));
  CHECK(is_ins_by_deletion(first8));

  const InsAnalysis a = analyze_ins(first9);
  CHECK(a.unsat);
  CHECK(a.clauses_without_pivot() == std::vector<std::size_t>{8});
  CHECK(first9[8] == Clause(4, {-1, -2, -4}));
  CHECK_FALSE(ins_certificate(first9));
  CHECK_FALSE(is_ins_by_deletion(first9));
  CHECK_FALSE(ins_certificate(t1));
  CHECK_FALSE(is_ins_by_deletion(make_formula(4, {{1, 2, 3}})));
}

TEST_CASE("covering clauses") {
  const Formula all(4, clause_universe(4));
  for (std::uint64_t v = 0; v < 16; ++v) {
    std::vector<Clause> expected;
    for (const auto& row : incidence::rows)
      if (row.bits[v] == '1')
        expected.emplace_back(4, row.lits);
    const auto got = covering_clauses(all, v);
    CHECK(got.size() == 4);
    REQUIRE(got.size() == expected.size());
    for (std::size_t p : got)
      CHECK(std::find(expected.begin(), expected.end(), all[p]) != expected.end());
  }
  const Formula t1 = make_formula(4, {{1, 2, -3}, {-2, 3, -4}, {-1, -3, 4}});
  CHECK(covering_clauses(t1, 1).empty());
  CHECK_THROWS_AS(covering_clauses(t1, 16), DomainError);
}

TEST_CASE("cover test matches brute force and the oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 20);
    const auto lits = oracle::random_formula(n, m, rng);
    const Formula f = make_formula(n, lits);
    const bool unsat = !oracle::satisfiable(n, lits);
    REQUIRE(is_unsat_cover(f) == unsat);
    REQUIRE(is_unsat_bruteforce(f) == unsat);
  }
  const Formula all(4, clause_universe(4));
  for (int m = 1; m <= 3; ++m) {
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i)
      idx[i] = i;
    do {
      const Formula f = all.select(as_positions(idx));
      REQUIRE(is_unsat_cover(f) == is_unsat_bruteforce(f));
    } while (oracle::next_combination(idx, 32));
  }
}

TEST_CASE("unsatisfiability is monotone") {
  std::mt19937_64 rng(7);
  const auto universe = oracle::all_clauses(4);
  for (int trial = 0; trial < 500; ++trial) {
    auto lits = oracle::random_unsat(4, 8 + static_cast<int>(rng() % 6), rng);
    REQUIRE(is_unsat_cover(make_formula(4, lits)));
    for (const auto& extra : universe) {
      if (std::find(lits.begin(), lits.end(), extra) != lits.end())
        continue;
      lits.push_back(extra);
      CHECK(is_unsat_cover(make_formula(4, lits)));
      if (rng() % 4 == 0)
        break;
    }
  }
}

TEST_CASE("certificates are sound and classifiers agree") {
  std::mt19937_64 rng(99);
  int ins_seen = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int m = 8 + static_cast<int>(rng() % 5);
    const auto lits = oracle::random_unsat(4, m, rng);
    const Formula f = make_formula(4, lits);
    const auto cert = ins_certificate(f);
    const bool oracle_ins = oracle::minimal_unsat(4, lits);
    REQUIRE(cert.has_value() == oracle_ins);
    REQUIRE(is_ins_by_deletion(f) == oracle_ins);
    if (!cert)
      continue;
    ++ins_seen;
    REQUIRE(cert->pivots.size() == f.m());
    for (std::size_t j = 0; j < f.m(); ++j) {
      CHECK(covering_clauses(f, cert->pivots[j]) == std::vector<std::size_t>{j});
      // Smallest pivot: no smaller assignment is falsified by clause j alone.
      for (std::uint64_t v = 0; v < cert->pivots[j]; ++v)
        CHECK(covering_clauses(f, v) != std::vector<std::size_t>{j});
    }
    CHECK(verify_certificate(f, *cert));
    InsCertificate broken = *cert;
    broken.pivots[0] = broken.pivots[1];
    CHECK_FALSE(verify_certificate(f, broken));
  }
  CHECK(ins_seen > 0);
}

TEST_CASE("no certificate outside the size bounds") {
  const Formula all(4, clause_universe(4));
  for (int m = 1; m <= 5; ++m) {
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i)
      idx[i] = i;
    do {
      REQUIRE_FALSE(ins_certificate(all.select(as_positions(idx))));
    } while (oracle::next_combination(idx, 32));
  }
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3000; ++trial) {
    const int m = trial % 2 ? 7 : 13 + static_cast<int>(rng() % 20);
    CHECK_FALSE(ins_certificate(make_formula(4, oracle::random_formula(4, m, rng))));
  }
}

TEST_CASE("ins bounds") {
  const auto b4 = ins_bounds(4);
  CHECK(b4.m_min == 8);
  CHECK(b4.m_max_real == Rational(64, 5));
  CHECK(b4.m_max_int == 12);
  const auto b5 = ins_bounds(5);
  CHECK(b5.m_max_real == Rational(320, 13));
  CHECK(b5.m_max_int == 24);
  CHECK(ins_bounds(3).m_max_int == 8);
  CHECK_THROWS_AS(ins_bounds(2), DomainError);
}

TEST_CASE("certificate text") {
  const Formula first8 = make_formula(4, incidence_prefix(8));
  const auto cert = *ins_certificate(first8);
  const std::string text = to_text(cert);
  CHECK(text.substr(0, 4) == "1:0\n");
  CHECK(parse_certificate(text) == cert);
  CHECK_THROWS_AS(parse_certificate("2:0\n"), Error);
  CHECK_THROWS_AS(parse_certificate("1:x\n"), Error);
  CHECK_THROWS_AS(parse_certificate("1 0\n"), Error);
}

TEST_CASE("brute force refuses large n") {
  const Formula big = make_formula(25, {{1, 2, 3}});
  CHECK_THROWS_AS(is_unsat_bruteforce(big), DomainError);
  CHECK_THROWS_AS(is_unsat_cover(big), DomainError);
  const Formula wide = make_formula(20, {{1, 2, 3}, {-1, 2, 3}, {1, -2, 3}, {1, 2, -3}, {-1, -2, 3},
                                         {-1, 2, -3}, {1, -2, -3}, {-1, -2, -20}});
  CHECK_FALSE(is_unsat_cover(wide));
  CHECK_FALSE(is_unsat_bruteforce(wide));
}
