#pragma once

// INS-Reduction experiments: hide an INS seed among random extra clauses, then
// look for an INS sub-formula either by walking the sub-formulae and querying
// the catalog (subsets-first) or by walking the catalog and testing each entry
// for containment (catalog-first). Both stop at the first hit.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cnflab/bigint.hpp"
#include "cnflab/catalog.hpp"
#include "cnflab/census.hpp"
#include "cnflab/formula.hpp"

namespace cnflab {

struct NoisyInstance {
  Formula seed;
  // Drawn clauses, in draw order.
  std::vector<Clause> noise;
  Formula combined;
  std::uint64_t rng_seed = 0;
};

// Adds seed.m() distinct clauses drawn uniformly without replacement from the
// clauses not in `seed`. Throws DomainError if the seed is not INS or the
// universe has fewer than 2m clauses.
NoisyInstance gen_noisy(const Formula& seed, std::uint64_t rng_seed);

enum class Approach { subsets_first, catalog_first };

std::string to_string(Approach approach);

struct ReductionResult {
  std::optional<Formula> found;
  Approach approach = Approach::subsets_first;
  // Candidate sub-formulae (subsets-first) or catalog entries (catalog-first) examined.
  std::uint64_t visited = 0;
  // Catalog queries (subsets-first) or signature comparisons inside the
  // containment tests (catalog-first).
  std::uint64_t membership_checks = 0;
  // Summed pipeline counts of the catalog queries (subsets-first only).
  OperationReport lookups;
};

// Both throw DomainError when the catalog is not an INS catalog for the
// formula's n, or does not cover every INS size a sub-formula could have.
ReductionResult reduce_subsets_first(const Formula& combined, const Catalog& catalog);
ReductionResult reduce_catalog_first(const Formula& combined, const Catalog& catalog);

inline ReductionResult reduce_subsets_first(const NoisyInstance& instance, const Catalog& catalog) {
  return reduce_subsets_first(instance.combined, catalog);
}
inline ReductionResult reduce_catalog_first(const NoisyInstance& instance, const Catalog& catalog) {
  return reduce_catalog_first(instance.combined, catalog);
}

// C(2m, m): ways to choose which half of a 2m-clause formula is the seed.
BigInt noisy_subset_count(std::uint64_t m);

// Worst case of subsets-first for a seed of size m hidden among m extra
// clauses with no smaller core: every candidate of size 8..m-1 plus all of size m.
BigInt subsets_first_worst_case(std::uint64_t m);

// Five-term pivot-counting lower bound on the number of INS formulae.
struct BoundReport {
  int n = 0;
  BigInt first_choices;   // 2^n C(n,3)
  BigInt step;            // 2^(n-3) C(n,3) + (2^(n-3) - 1)(C(n,3) - 1)
  std::vector<BigInt> numerator_terms;        // first_choices - i * step, i = 0..4
  std::vector<Rational> denominator_terms;    // m_max - i, i = 0..4
  BigInt numerator_product;                   // product of max(1, term)
  Rational denominator_product;
  Rational bound_value;
  std::optional<BigInt> observed_ins_sum;

  // Reported, never asserted.
  std::optional<bool> observed_at_least_bound() const;
};

BoundReport appendix_bound(int n, std::optional<BigInt> observed_ins_sum = std::nullopt);
// Sum of the ins column over rows with the given n.
std::optional<BigInt> observed_ins_sum(std::span<const CensusRow> rows, int n);
void print_bound_report(const BoundReport& report, std::ostream& out);

// One reduction run for the experiment CSV.
struct ExperimentRecord {
  std::uint64_t rng_seed = 0;
  int n = 0;
  std::uint64_t m = 0;
  Approach approach = Approach::subsets_first;
  std::uint64_t found_size = 0; // 0 when nothing was found
  std::uint64_t visited = 0;
  std::uint64_t membership_checks = 0;
};

// Seed for instance k: the INS entry of size m picked by `rng_seed`, with noise
// drawn from the same seed. Throws DomainError if the catalog has no size-m entry.
NoisyInstance instance_from_catalog(const Catalog& catalog, std::uint64_t m,
                                    std::uint64_t rng_seed);

// For every m and k in [0, per_m), runs both approaches on
// instance_from_catalog(catalog, m, base_seed + k). Throws Error if a run
// returns something that is not a verified INS sub-formula, or if the two
// approaches disagree on success.
std::vector<ExperimentRecord> run_experiments(const Catalog& catalog,
                                              std::span<const std::uint64_t> m_values,
                                              std::uint64_t per_m, std::uint64_t base_seed);

// Header "rngSeed,n,m,approach,foundSize,visited,membershipChecks".
void emit_experiment_csv(std::span<const ExperimentRecord> records, std::ostream& out);

// Per m: mean visited for each approach next to the subsets-first worst case.
void print_trend_table(std::span<const ExperimentRecord> records, std::ostream& out);

} // namespace cnflab
