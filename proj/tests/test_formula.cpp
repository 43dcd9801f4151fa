#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>
#include <set>
#include <sstream>

#include "cnflab/error.hpp"
#include "cnflab/formula.hpp"
#include "cnflab/io.hpp"
#include "support.hpp"
#include "incidence.hpp"

using namespace cnflab;

namespace {

Formula sample_formula() {
  return make_formula(4, {{1, 2, -3}, {-2, 3, -4}, {-1, -3, 4}});
}

} // namespace

TEST_CASE("sample formula signatures") {
  CHECK(signature_of(Clause(4, {1, 2, -3})).value == 164);
  CHECK(signature_of(Clause(4, {-2, 3, -4})).value == 25);
  CHECK(signature_of(Clause(4, {-1, -3, 4})).value == 70);
  CHECK(to_signature_line(sample_formula()) == "164,70,25");
  const auto sig = formula_signature(sample_formula());
  REQUIRE(sig.size() == 3);
  CHECK(sig[0].value == 164);
  CHECK(sig[1].value == 70);
  CHECK(sig[2].value == 25);
  CHECK(clause_from_signature(4, 164) == Clause(4, {1, 2, -3}));
}

TEST_CASE("signature agrees with the text-row oracle") {
  for (int n = 3; n <= 8; ++n)
    for (const auto& lits : oracle::all_clauses(n))
      REQUIRE(signature_of(Clause(n, lits)).value == oracle::signature(n, lits));
}

TEST_CASE("universe round trip, range and popcount") {
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const auto universe = clause_universe(n);
    CHECK(universe.size() == 8 * static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6));
    const std::uint64_t lo = 21;
    const std::uint64_t hi = 21ull << (2 * n - 5);
    CHECK(min_signature(n) == lo);
    CHECK(max_signature(n) == hi);
    bool saw_lo = false;
    bool saw_hi = false;
    std::uint64_t prev = UINT64_MAX;
    for (const auto& c : universe) {
      const auto s = signature_of(c).value;
      CHECK(s < prev);
      prev = s;
      CHECK(std::popcount(s) == 3);
      CHECK(s >= lo);
      CHECK(s <= hi);
      saw_lo |= s == lo;
      saw_hi |= s == hi;
      CHECK(clause_from_signature(n, s) == c);
      const FalsifySet f = falsify_set(c);
      CHECK(f.count() == (std::uint64_t{1} << (n - 3)));
    }
    CHECK(saw_lo);
    CHECK(saw_hi);
    CHECK(clause_from_signature(n, lo) == Clause(n, {-(n - 2), -(n - 1), -n}));
    CHECK(clause_from_signature(n, hi) == Clause(n, {1, 2, 3}));
  }
}

TEST_CASE("falsify sets match literal evaluation") {
  for (int n = 3; n <= 9; ++n)
    for (const auto& lits : oracle::all_clauses(n)) {
      const FalsifySet f = falsify_set(Clause(n, lits));
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
        REQUIRE(f.test(v) == !oracle::clause_true(lits, v));
    }
  CHECK(falsify_set(Clause(4, {1, 2, 4})).indices() == std::vector<std::uint64_t>{0, 4});
  CHECK(falsify_set(Clause(4, {1, 2, 3})).indices() == std::vector<std::uint64_t>{0, 8});
  CHECK(falsify_set(Clause(12, {-1, 7, -12})).count() == 512);
}

TEST_CASE("incidence matrix at n=4 matches the printed table") {
  REQUIRE(incidence::rows.size() == 32);
  std::set<std::uint64_t> seen;
  for (const auto& row : incidence::rows) {
    CAPTURE(row.bits);
    const FalsifySet f = falsify_set(Clause(4, row.lits));
    for (std::uint64_t v = 0; v < 16; ++v)
      CHECK(f.test(v) == (row.bits[v] == '1'));
    seen.insert(oracle::signature(4, row.lits));
  }
  CHECK(seen.size() == 32);
}

TEST_CASE("malformed signatures and clauses") {
  CHECK_THROWS_AS(clause_from_signature(4, 3), MalformedSignature);
  CHECK_THROWS_AS(clause_from_signature(4, 0b10001), MalformedSignature);
  CHECK_THROWS_AS(clause_from_signature(4, 0b1010100000), MalformedSignature);
  CHECK_THROWS_AS(clause_from_signature(4, 0b10101010), MalformedSignature);
  CHECK_THROWS_AS(Clause(4, {1, 1, 2}), InvalidClause);
  CHECK_THROWS_AS(Clause(4, {1, -1, 2}), InvalidClause);
  CHECK_THROWS_AS(Clause(4, {0, 1, 2}), InvalidClause);
  CHECK_THROWS_AS(Clause(4, {1, 2, 5}), InvalidClause);
  CHECK_THROWS_AS(clause_universe(2), DomainError);
}

TEST_CASE("formula canonicalization") {
  const Formula a = make_formula(4, {{-1, -3, 4}, {1, 2, -3}, {-2, 3, -4}});
  CHECK(a == sample_formula());
  CHECK(a.signature_values() == std::vector<std::uint64_t>{164, 70, 25});
  CHECK(formula_signature(make_formula(4, {{1, 2, 3}})).size() == 1);
  CHECK_THROWS_AS(make_formula(4, {{1, 2, 3}, {3, 2, 1}}), DomainError);
  CHECK_THROWS_AS(make_formula(4, {}), DomainError);
  CHECK_THROWS_AS(Formula(4, {Clause(4, {1, 2, 3}), Clause(5, {1, 2, 3})}), DomainError);
  const std::vector<std::uint64_t> sigs{25, 164, 70};
  CHECK(Formula::from_signatures(4, sigs) == sample_formula());
  const std::vector<std::size_t> pos{0, 2};
  CHECK(sample_formula().select(pos).signature_values() == std::vector<std::uint64_t>{164, 25});
}

TEST_CASE("size measure") {
  CHECK(size_of(sample_formula()).s == 13);
  CHECK(size_of(make_formula(4, {{1, 2, 3}, {1, 2, 4}, {2, 3, 4}})).s == 8);
  CHECK(size_of(make_formula(4, {{-1, -2, -3}, {-1, -2, -4}})).s == 11);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int universe = 8 * n * (n - 1) * (n - 2) / 6;
    const int m = 1 + static_cast<int>(rng() % universe);
    const Formula f = make_formula(n, oracle::random_formula(n, m, rng));
    const auto s = size_of(f).s;
    CHECK(s >= 3 * f.m() - 1);
    CHECK(s <= 6 * f.m() - 1);
  }
}

TEST_CASE("dimacs round trip") {
  const Formula f = parse_dimacs("c sample\np cnf 4 3\n1 2 -3 0\n-2 3 -4 0\n-1 -3 4 0\n");
  CHECK(f == sample_formula());
  CHECK(to_dimacs(f) == "p cnf 4 3\n1 2 -3 0\n-1 -3 4 0\n-2 3 -4 0\n");
  CHECK(parse_dimacs(to_dimacs(f)) == f);
  CHECK(parse_dimacs("p cnf 4 2\n3 -1 2 0 -4\n1 2 0\n") ==
        make_formula(4, {{-1, 2, 3}, {1, 2, -4}}));
  CHECK(parse_dimacs("p cnf 4 1\n1 2 3 0\n%\n0\n") == make_formula(4, {{1, 2, 3}}));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const int m = 1 + static_cast<int>(rng() % 8);
    const Formula g = make_formula(n, oracle::random_formula(n, m, rng));
    CHECK(parse_dimacs(to_dimacs(g)) == g);
    CHECK(parse_signature_line(n, to_signature_line(g)) == g);
  }
}

TEST_CASE("dimacs errors carry line numbers") {
  const auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_dimacs(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("p cnf 4 1\n1 1 2 0\n") == 2);
  CHECK(line_of("p cnf 4 1\n1 2 0\n") == 2);
  CHECK(line_of("p cnf 4 1\n1 2 3 4 0\n") == 2);
  CHECK(line_of("p cnf 4 1\n1 2 9 0\n") == 2);
  CHECK(line_of("p cnf 4 1\n1 x 3 0\n") == 2);
  CHECK(line_of("p cnf 4 2\n1 2 3 0\n3 2 1 0\n") == 3);
  CHECK(line_of("1 2 3 0\n") == 1);
  CHECK(line_of("c only\n") != 0);
  CHECK(line_of("p cnf 4 2\n1 2 3 0\n") != 0);
  CHECK(line_of("p cnf 4 1\n1 2 3\n") != 0);
  CHECK(line_of("p cnf 2 1\n1 2 3 0\n") == 1);
  CHECK_THROWS_AS(parse_signature_line(4, "70,164,25"), Error);
  CHECK_THROWS_AS(parse_signature_line(4, "164,,25"), Error);
  CHECK_THROWS_AS(parse_signature_line(4, "164,3"), Error);
}
