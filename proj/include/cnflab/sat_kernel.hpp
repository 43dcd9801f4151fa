#pragma once

// Satisfiability and irreducible-non-satisfiability (INS) decisions.
//
// A formula is unsatisfiable exactly when the falsify sets of its clauses
// cover {0,1}^n. An assignment falsified by exactly one clause of the formula
// is a pivot for that clause; an unsatisfiable formula is INS (every proper
// sub-formula satisfiable) exactly when every clause has a pivot.
//
// The brute-force routines evaluate the clauses directly on every assignment
// and never touch falsify sets, so they serve as an independent check of the
// covering-based routines.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnflab/bigint.hpp"
#include "cnflab/formula.hpp"

namespace cnflab {

struct CoverState {
  FalsifySet covered;
  std::vector<FalsifySet> per_clause;
};

CoverState cover_state(const Formula& formula);

bool is_unsat_cover(const Formula& formula);

// Exhaustive search over {0,1}^n. Throws DomainError when n > kMaxExplicitVariables.
bool is_unsat_bruteforce(const Formula& formula);

// Positions of the clauses falsified by assignment `v`, ascending.
std::vector<std::size_t> covering_clauses(const Formula& formula, std::uint64_t v);

// pivots[j] is the smallest pivot of clause j (canonical position).
struct InsCertificate {
  std::vector<std::uint64_t> pivots;

  friend bool operator==(const InsCertificate&, const InsCertificate&) = default;
};

struct InsAnalysis {
  bool unsat = false;
  // Smallest pivot of each clause, if it has one.
  std::vector<std::optional<std::uint64_t>> first_pivot;

  std::vector<std::size_t> clauses_without_pivot() const;
  std::optional<InsCertificate> certificate() const;
};

InsAnalysis analyze_ins(const Formula& formula);
std::optional<InsCertificate> ins_certificate(const Formula& formula);

// Replays a certificate: every pivot must be falsified by its clause and by no other.
bool verify_certificate(const Formula& formula, const InsCertificate& certificate);

// Minimality by clause deletion, decided with brute-force evaluation: the
// formula is unsatisfiable and each formula obtained by dropping one clause is
// satisfiable.
bool is_ins_by_deletion(const Formula& formula);

// One "clause:pivot" line per clause, clause positions 1-based in canonical order.
std::string to_text(const InsCertificate& certificate);
InsCertificate parse_certificate(std::string_view text);

struct InsBounds {
  int m_min = 8;
  // C(n,3) 2^n / (2^(n-3) + C(n,3) - 1)
  Rational m_max_real;
  std::uint64_t m_max_int = 0;
};

InsBounds ins_bounds(int n);

} // namespace cnflab
