#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <set>
#include <sstream>

#include "cnflab/census.hpp"
#include "cnflab/error.hpp"
#include "cnflab/formula.hpp"
#include "support.hpp"

using namespace cnflab;

namespace {

const Budget kBudget{300.0, UINT64_MAX};

// Minimal edge covers of the 4-cube by size. At n = 4 a clause falsifies the
// two endpoints of one edge, so these are the INS formulae.
std::map<int, std::uint64_t> minimal_edge_covers() {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 16; ++u)
    for (int k = 0; k < 4; ++k)
      if (!((u >> k) & 1))
        edges.emplace_back(u, u | (1 << k));
  std::map<int, std::uint64_t> counts;
  std::array<int, 16> degree{};
  std::vector<int> chosen;
  auto all_private = [&] {
    for (int e : chosen)
      if (degree[edges[e].first] > 1 && degree[edges[e].second] > 1)
        return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t next) -> void {
    const int covered = static_cast<int>(std::count_if(degree.begin(), degree.end(), [](int d) { return d > 0; }));
    if (covered == 16) {
      ++counts[static_cast<int>(chosen.size())];
      return;
    }
    for (std::size_t e = next; e < edges.size(); ++e) {
      ++degree[edges[e].first];
      ++degree[edges[e].second];
      chosen.push_back(static_cast<int>(e));
      if (all_private())
        self(self, e + 1);
      chosen.pop_back();
      --degree[edges[e].first];
      --degree[edges[e].second];
    }
  };
  rec(rec, 0);
  return counts;
}

std::uint16_t edge_mask(const oracle::Lits& c) {
  std::uint16_t mask = 0;
  for (int v = 0; v < 16; ++v)
    if (!oracle::clause_true(c, v))
      mask |= std::uint16_t(1u << v);
  return mask;
}

using Key = std::vector<std::uint64_t>;

std::set<Key> listed(bool ins, int n, std::uint64_t m) {
  const auto universe = clause_universe(n);
  std::set<Key> out;
  const SubsetVisitor visit = [&](std::span<const std::size_t> positions) {
    Key k;
    for (std::size_t p : positions)
      k.push_back(signature_of(universe[p]).value);
    out.insert(k);
  };
  if (ins)
    enumerate_ins(n, m, kBudget, visit);
  else
    enumerate_unsat(n, m, kBudget, visit);
  return out;
}

Key transformed(const Key& k, const std::array<int, 4>& perm, unsigned flips) {
  std::vector<Clause> clauses;
  for (std::uint64_t s : k) {
    auto lits = clause_from_signature(4, s).literals();
    for (int& l : lits) {
      const int v = std::abs(l);
      const bool neg = (l < 0) != bool((flips >> (v - 1)) & 1);
      l = neg ? -perm[v - 1] : perm[v - 1];
    }
    clauses.emplace_back(4, lits);
  }
  return Formula(4, std::move(clauses)).signature_values();
}

} // namespace

TEST_CASE("totals") {
  CHECK(count_total(4, 3) == 4960);
  CHECK(count_total(4, 8) == 10518300);
  CHECK(count_total(4, 32) == 1);
  CHECK(count_total(3, 8) == 1);
  CHECK(count_total(6, 80) == binomial(160, 80));
  CHECK_THROWS_AS(count_total(4, 33), DomainError);
  CHECK_THROWS_AS(count_total(2, 1), DomainError);
}

TEST_CASE("m = 8 against perfect matchings and a full subset scan") {
  std::vector<std::vector<std::pair<int, int>>> matchings;
  oracle::hypercube_matchings(4, matchings);
  CHECK(matchings.size() == 272);

  std::set<Key> from_matchings;
  for (const auto& mt : matchings) {
    std::vector<oracle::Lits> lits;
    for (const auto& [u, w] : mt) {
      int k = 0;
      while ((u ^ w) != (1 << k))
        ++k;
      lits.push_back(oracle::clause_of_edge(u, k));
    }
    from_matchings.insert(make_formula(4, lits).signature_values());
  }
  CHECK(from_matchings.size() == 272);
  CHECK(listed(true, 4, 8) == from_matchings);
  CHECK(listed(false, 4, 8) == from_matchings);

  const auto pool = oracle::all_clauses(4);
  std::vector<std::uint16_t> masks;
  for (const auto& c : pool)
    masks.push_back(edge_mask(c));
  std::uint64_t unsat = 0;
  std::uint64_t ins = 0;
  std::vector<int> idx{0, 1, 2, 3, 4, 5, 6, 7};
  do {
    std::uint16_t cover = 0;
    for (int i : idx)
      cover |= masks[i];
    if (cover == 0xFFFF) {
      ++unsat;
      bool every_private = true;
      for (int i : idx) {
        std::uint16_t others = 0;
        for (int j : idx)
          if (j != i)
            others |= masks[j];
        every_private &= (masks[i] & ~others) != 0;
      }
      ins += every_private;
    }
  } while (oracle::next_combination(idx, 32));
  CHECK(unsat == 272);
  CHECK(ins == 272);

  CHECK(count_unsat_enum(4, 8, {}, kBudget) == 272);
  CHECK(count_unsat_ie(4, 8) == 272);
  CHECK(count_ins_enum(4, 8, {}, kBudget) == 272);
}

TEST_CASE("ins counts against minimal edge covers") {
  const auto covers = minimal_edge_covers();
  for (std::uint64_t m = 1; m <= 32; ++m) {
    CAPTURE(m);
    const auto it = covers.find(static_cast<int>(m));
    const std::uint64_t expected = it == covers.end() ? 0 : it->second;
    CHECK(count_ins_enum(4, m, {}, kBudget) == expected);
    if (m < 8 || m > 12)
      CHECK(expected == 0);
    else
      CHECK(expected > 0);
  }
}

TEST_CASE("enumeration and inclusion-exclusion agree") {
  for (std::uint64_t m : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 28, 29, 30, 31, 32}) {
    CAPTURE(m);
    CHECK(count_unsat_enum(4, m, {}, kBudget) == count_unsat_ie(4, m));
  }
  for (std::uint64_t m = 0; m <= 8; ++m)
    CHECK(count_unsat_enum(3, m, {}, kBudget) == count_unsat_ie(3, m));
  CHECK(count_unsat_ie(3, 8) == 1);
  CHECK(count_ins_enum(3, 8, {}, kBudget) == 1);
  CHECK(count_unsat_ie(4, 1) == 0);
  CHECK(count_unsat_ie(4, 7) == 0);
  CHECK(count_unsat_ie(4, 32) == 1);
  CHECK_THROWS_AS(count_unsat_enum(5, 8, {}, kBudget), DomainError);
}

TEST_CASE("listings are closed under variable permutation and polarity flips") {
  const std::set<Key> ins9 = listed(true, 4, 9);
  const std::set<Key> unsat9 = listed(false, 4, 9);
  CHECK(ins9.size() == count_ins_enum(4, 9, {}, kBudget));
  CHECK(unsat9.size() == count_unsat_ie(4, 9));
  std::array<int, 4> perm{1, 2, 3, 4};
  int checked = 0;
  do {
    for (unsigned flips : {0u, 1u, 6u, 15u}) {
      for (const auto* family : {&ins9, &unsat9}) {
        std::set<Key> image;
        for (const auto& k : *family)
          image.insert(transformed(k, perm, flips));
        CHECK(image == *family);
      }
      ++checked;
    }
  } while (std::next_permutation(perm.begin(), perm.end()) && checked < 24);
}

TEST_CASE("serial, parallel and partitioned runs agree") {
  for (std::uint64_t m : {8, 9, 10, 11, 12, 13}) {
    CAPTURE(m);
    const BigInt serial = count_ins_enum(4, m, {}, kBudget, Execution::serial);
    CHECK(count_ins_enum(4, m, {}, kBudget, Execution::parallel) == serial);
    BigInt merged = 0;
    for (std::size_t i = 0; i < 3; ++i)
      merged += count_ins_enum(4, m, {3, i}, kBudget, Execution::serial);
    CHECK(merged == serial);
  }
  for (std::uint64_t m : {9, 10, 31}) {
    const BigInt serial = count_unsat_enum(4, m, {}, kBudget, Execution::serial);
    CHECK(count_unsat_enum(4, m, {}, kBudget, Execution::parallel) == serial);
    BigInt merged = 0;
    for (std::size_t i = 0; i < 5; ++i)
      merged += count_unsat_enum(4, m, {5, i}, kBudget, Execution::parallel);
    CHECK(merged == serial);
  }
  CHECK_THROWS_AS(count_unsat_enum(4, 9, {3, 3}, kBudget), DomainError);
}

TEST_CASE("budget exhaustion is an error") {
  CHECK_THROWS_AS(count_unsat_enum(4, 12, {}, Budget{300.0, 1000}), BudgetExceeded);
  CHECK_THROWS_AS(count_ins_enum(4, 10, {}, Budget{1e-9, UINT64_MAX}), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_ins(4, 10, Budget{300.0, 100}, [](auto) {}), BudgetExceeded);
  CHECK_THROWS_AS(count_unsat_enum(4, 9, {}, Budget{0.0, UINT64_MAX}), DomainError);
  CHECK_THROWS_AS(run_census(4, 14, 16, {}, Budget{0.01, UINT64_MAX},
                             CensusOptions{UnsatMethod::enumeration}),
                  BudgetExceeded);
}

TEST_CASE("census rows and csv") {
  const auto rows = run_census(4, 1, 13, {}, kBudget);
  REQUIRE(rows.size() == 13);
  for (const auto& r : rows) {
    CAPTURE(r.m);
    CHECK(r.total == binomial(32, r.m));
    CHECK(r.ins <= r.unsat);
    CHECK(r.unsat <= r.total);
    CHECK(r.method == CountMethod::both);
    CHECK((r.ins > 0) == (r.m >= 8 && r.m <= 12));
    if (r.m < 8)
      CHECK(r.unsat == 0);
  }
  CHECK(rows[7].unsat == 272);
  CHECK(rows[7].ins == 272);
  CHECK(rows[12].ins == 0);

  std::ostringstream out;
  emit_census_csv(rows, out);
  const std::string text = out.str();
  CHECK(text.rfind("n,m,total,unsat,ins,method\n", 0) == 0);
  CHECK(text.find("\n4,8,10518300,272,272,both\n") != std::string::npos);
  std::istringstream in(text);
  const auto back = parse_census_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].m == rows[i].m);
    CHECK(back[i].total == rows[i].total);
    CHECK(back[i].unsat == rows[i].unsat);
    CHECK(back[i].ins == rows[i].ins);
    CHECK(back[i].method == rows[i].method);
  }
  std::istringstream bad("n,m,total\n");
  CHECK_THROWS_AS(parse_census_csv(bad), ParseError);
  std::istringstream short_row("n,m,total,unsat,ins,method\n4,8,1\n");
  CHECK_THROWS_AS(parse_census_csv(short_row), ParseError);
}

TEST_CASE("census methods") {
  const auto ie = run_census(4, 30, 32, {}, kBudget, CensusOptions{UnsatMethod::inclusion_exclusion});
  for (const auto& r : ie)
    CHECK(r.method == CountMethod::inclusion_exclusion);
  CHECK(ie[2].unsat == 1);
  const auto en = run_census(4, 8, 9, {}, kBudget, CensusOptions{UnsatMethod::enumeration});
  CHECK(en[0].method == CountMethod::enumeration);
  CHECK(en[1].unsat == 15936);

  std::vector<std::string> notes;
  CensusOptions limited;
  limited.enum_node_limit = 10;
  limited.on_note = [&](const std::string& s) { notes.push_back(s); };
  const auto fallback = run_census(4, 9, 9, {}, kBudget, limited);
  CHECK(fallback[0].method == CountMethod::inclusion_exclusion);
  CHECK(fallback[0].unsat == 15936);
  CHECK(notes.size() == 1);

  BigInt unsat = 0;
  BigInt ins = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto part = run_census(4, 10, 10, {4, i}, kBudget);
    CHECK(part[0].method == CountMethod::enumeration);
    unsat += part[0].unsat;
    ins += part[0].ins;
  }
  CHECK(unsat == count_unsat_ie(4, 10));
  CHECK(ins == count_ins_enum(4, 10, {}, kBudget));
}
