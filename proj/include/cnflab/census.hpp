#pragma once

// Exact per-(n, m) counts of all formulae, unsatisfiable formulae and INS
// formulae.
//
// The enumerators walk m-subsets of clause_universe(n) as a prefix DFS in
// descending signature order, so every subset is reached once. The search is
// split into work units by its first (largest-signature) clause; a WorkSplit
// selects units u with u % partitions == index, which lets several processes
// share a sweep and merge by addition. Within a process the selected units
// run on OpenMP threads (Execution::parallel) or one after another
// (Execution::serial, the reference used by tests and benchmarks). Both give
// identical results.
//
// Enumeration handles n = 3 and n = 4. count_unsat_ie is an independent
// inclusion-exclusion count over point sets of {0,1}^n.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cnflab/bigint.hpp"

namespace cnflab {

struct WorkSplit {
  std::size_t partitions = 1;
  std::size_t index = 0;

  bool whole() const noexcept { return partitions == 1; }
};

// Required for every enumeration. Exceeding either limit raises BudgetExceeded.
struct Budget {
  double seconds = 600.0;
  std::uint64_t max_nodes = UINT64_MAX;
};

enum class Execution { serial, parallel };

BigInt count_total(int n, std::uint64_t m);

BigInt count_unsat_enum(int n, std::uint64_t m, const WorkSplit& split, const Budget& budget,
                        Execution exec = Execution::parallel);
BigInt count_unsat_ie(int n, std::uint64_t m);
BigInt count_ins_enum(int n, std::uint64_t m, const WorkSplit& split, const Budget& budget,
                      Execution exec = Execution::parallel);

// Calls `visit` with the universe positions (ascending) of every INS, resp.
// unsatisfiable, m-clause formula, in lexicographic order of positions.
using SubsetVisitor = std::function<void(std::span<const std::size_t>)>;
void enumerate_ins(int n, std::uint64_t m, const Budget& budget, const SubsetVisitor& visit);
void enumerate_unsat(int n, std::uint64_t m, const Budget& budget, const SubsetVisitor& visit);

enum class CountMethod { enumeration, inclusion_exclusion, both };

std::string to_string(CountMethod method);

struct CensusRow {
  int n = 0;
  std::uint64_t m = 0;
  BigInt total;
  BigInt unsat;
  BigInt ins;
  CountMethod method = CountMethod::enumeration;
};

enum class UnsatMethod {
  // Enumeration when it fits in `enum_node_limit`, always cross-checked by
  // inclusion-exclusion; inclusion-exclusion alone otherwise.
  automatic,
  enumeration,
  inclusion_exclusion,
  both,
};

struct CensusOptions {
  UnsatMethod unsat_method = UnsatMethod::automatic;
  std::uint64_t enum_node_limit = 2'000'000'000;
  Execution exec = Execution::parallel;
  // Called with a note whenever automatic mode falls back to inclusion-exclusion.
  std::function<void(const std::string&)> on_note;
};

// One row per m in [m_low, m_high]. With a partial WorkSplit only enumeration
// is possible and the unsat/ins columns hold this partition's share.
std::vector<CensusRow> run_census(int n, std::uint64_t m_low, std::uint64_t m_high,
                                  const WorkSplit& split, const Budget& budget,
                                  const CensusOptions& options = {});

// Header "n,m,total,unsat,ins,method", then one row per cell, counts in decimal.
void emit_census_csv(std::span<const CensusRow> rows, std::ostream& sink);
std::vector<CensusRow> parse_census_csv(std::istream& in);

} // namespace cnflab
