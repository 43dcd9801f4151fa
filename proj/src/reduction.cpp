#include "cnflab/reduction.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "cnflab/error.hpp"
#include "cnflab/sat_kernel.hpp"

namespace cnflab {

namespace {

// Uniform draw from [0, bound) using only the engine's raw output, so the
// sequence is the same on every standard library.
std::uint64_t draw_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = 0;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

// Sizes an INS sub-formula of `combined` could have: [8, min(floor(m_max), m - 1)].
std::pair<std::uint64_t, std::uint64_t> core_sizes(const Formula& combined) {
  const InsBounds bounds = ins_bounds(combined.n());
  const std::uint64_t low = static_cast<std::uint64_t>(bounds.m_min);
  const std::uint64_t high = std::min<std::uint64_t>(bounds.m_max_int, combined.m() - 1);
  return {low, high};
}

void require_catalog(const Formula& combined, const Catalog& catalog) {
  const auto& h = catalog.header();
  if (h.kind != CatalogKind::ins)
    throw DomainError("reduction needs an INS catalog, got kind=" + to_string(h.kind));
  if (h.n != combined.n())
    throw DomainError("catalog has n=" + std::to_string(h.n) + ", formula has n=" +
                      std::to_string(combined.n()));
  const auto [low, high] = core_sizes(combined);
  if (low <= high && (h.m_low > low || h.m_high < high))
    throw DomainError("catalog covers m=" + std::to_string(h.m_low) + ".." +
                      std::to_string(h.m_high) + " but cores of size " + std::to_string(low) +
                      ".." + std::to_string(high) + " are possible");
}

} // namespace

NoisyInstance gen_noisy(const Formula& seed, std::uint64_t rng_seed) {
  if (!ins_certificate(seed))
    throw DomainError("seed formula is not INS");
  const auto universe = clause_universe(seed.n());
  if (universe.size() < 2 * seed.m())
    throw DomainError("universe of " + std::to_string(universe.size()) +
                      " clauses is too small for " + std::to_string(seed.m()) + " extra clauses");
  std::vector<Clause> pool;
  pool.reserve(universe.size() - seed.m());
  for (const auto& c : universe)
    if (std::find(seed.clauses().begin(), seed.clauses().end(), c) == seed.clauses().end())
      pool.push_back(c);

  // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
  std::mt19937_64 engine(rng_seed);
  for (std::size_t k = 0; k < seed.m(); ++k) {
    const std::size_t pick = k + draw_below(engine, pool.size() - k);
    std::swap(pool[k], pool[pick]);
  }
  std::vector<Clause> noise(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(seed.m()));
  std::vector<Clause> all = seed.clauses();
  all.insert(all.end(), noise.begin(), noise.end());
  return NoisyInstance{seed, std::move(noise), Formula(seed.n(), std::move(all)), rng_seed};
}

std::string to_string(Approach approach) {
  return approach == Approach::subsets_first ? "subsets-first" : "catalog-first";
}

ReductionResult reduce_subsets_first(const Formula& combined, const Catalog& catalog) {
  require_catalog(combined, catalog);
  ReductionResult result;
  result.approach = Approach::subsets_first;
  const auto signatures = combined.signature_values();
  const std::size_t total = signatures.size();
  const std::uint64_t low = static_cast<std::uint64_t>(ins_bounds(combined.n()).m_min);

  std::vector<std::size_t> pick;
  std::vector<std::uint64_t> candidate;
  for (std::size_t p = low; p < total; ++p) {
    // Positions in lexicographic order; the picked signatures stay descending.
    pick.resize(p);
    for (std::size_t k = 0; k < p; ++k)
      pick[k] = k;
    while (true) {
      candidate.clear();
      for (std::size_t k : pick)
        candidate.push_back(signatures[k]);
      ++result.visited;
      ++result.membership_checks;
      if (catalog.contains(candidate, &result.lookups)) {
        result.found = Formula::from_signatures(combined.n(), candidate);
        return result;
      }
      std::size_t k = p;
      while (k > 0 && pick[k - 1] == total - p + (k - 1))
        --k;
      if (k == 0)
        break;
      ++pick[k - 1];
      for (std::size_t r = k; r < p; ++r)
        pick[r] = pick[r - 1] + 1;
    }
  }
  return result;
}

ReductionResult reduce_catalog_first(const Formula& combined, const Catalog& catalog) {
  require_catalog(combined, catalog);
  ReductionResult result;
  result.approach = Approach::catalog_first;
  const auto signatures = combined.signature_values();
  for (std::size_t i : catalog.order_by_size()) {
    const auto entry = catalog.entry(i);
    if (entry.size() >= signatures.size())
      break;
    ++result.visited;
    if (is_subformula(entry, signatures, &result.membership_checks)) {
      result.found = Formula::from_signatures(combined.n(), entry);
      return result;
    }
  }
  return result;
}

BigInt noisy_subset_count(std::uint64_t m) {
  if (m < 1)
    throw DomainError("noisy_subset_count needs m >= 1");
  return binomial(2 * m, m);
}

BigInt subsets_first_worst_case(std::uint64_t m) {
  if (m < 1)
    throw DomainError("subsets_first_worst_case needs m >= 1");
  BigInt total = 0;
  for (std::uint64_t p = 8; p < m; ++p)
    total += binomial(2 * m, p);
  return total + binomial(2 * m, m);
}

std::optional<bool> BoundReport::observed_at_least_bound() const {
  if (!observed_ins_sum)
    return std::nullopt;
  return Rational(*observed_ins_sum) >= bound_value;
}

BoundReport appendix_bound(int n, std::optional<BigInt> observed) {
  if (n < 4)
    throw DomainError("the pivot-counting bound needs n >= 4, got n=" + std::to_string(n));
  const InsBounds bounds = ins_bounds(n);
  const BigInt c3 = binomial(static_cast<std::uint64_t>(n), 3);
  const BigInt per_clause = BigInt(1) << (n - 3);

  BoundReport r;
  r.n = n;
  r.first_choices = (BigInt(1) << n) * c3;
  r.step = per_clause * c3 + (per_clause - 1) * (c3 - 1);
  r.numerator_product = 1;
  r.denominator_product = 1;
  for (int i = 0; i <= 4; ++i) {
    const BigInt term = r.first_choices - r.step * i;
    r.numerator_terms.push_back(term);
    r.numerator_product *= term > 1 ? term : BigInt(1);
    const Rational denom = bounds.m_max_real - i;
    r.denominator_terms.push_back(denom);
    r.denominator_product *= denom;
  }
  r.bound_value = Rational(r.numerator_product) / r.denominator_product;
  r.observed_ins_sum = std::move(observed);
  return r;
}

std::optional<BigInt> observed_ins_sum(std::span<const CensusRow> rows, int n) {
  std::optional<BigInt> sum;
  for (const auto& row : rows) {
    if (row.n != n)
      continue;
    if (!sum)
      sum = BigInt(0);
    *sum += row.ins;
  }
  return sum;
}

void print_bound_report(const BoundReport& r, std::ostream& out) {
  const auto approx = [](const Rational& q) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << q.convert_to<double>();
    return s.str();
  };
  out << "n=" << r.n << '\n';
  out << "first_choices=" << r.first_choices << " step=" << r.step << '\n';
  out << "numerator_terms=";
  for (std::size_t i = 0; i < r.numerator_terms.size(); ++i)
    out << (i ? "," : "") << r.numerator_terms[i];
  out << "\nnumerator_product=" << r.numerator_product << '\n';
  out << "denominator_terms=";
  for (std::size_t i = 0; i < r.denominator_terms.size(); ++i)
    out << (i ? "," : "") << r.denominator_terms[i];
  out << "\ndenominator_product=" << r.denominator_product << " (~" << approx(r.denominator_product)
      << ")\n";
  out << "bound=" << r.bound_value << " (~" << approx(r.bound_value) << ")\n";
  if (r.observed_ins_sum) {
    out << "observed_ins_sum=" << *r.observed_ins_sum << '\n';
    out << "observed_vs_bound=" << (*r.observed_at_least_bound() ? "observed>=bound" : "observed<bound")
        << '\n';
  } else {
    out << "observed_ins_sum=unknown\n";
  }
}

NoisyInstance instance_from_catalog(const Catalog& catalog, std::uint64_t m,
                                    std::uint64_t rng_seed) {
  std::vector<std::size_t> sized;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (catalog.entry(i).size() == m)
      sized.push_back(i);
  if (sized.empty())
    throw DomainError("catalog has no entry with m=" + std::to_string(m));
  // Seed choice uses a stream separate from the noise draw.
  std::mt19937_64 engine(rng_seed ^ 0x9E3779B97F4A7C15ull);
  const std::size_t pick = sized[draw_below(engine, sized.size())];
  return gen_noisy(Formula::from_signatures(catalog.header().n, catalog.entry(pick)), rng_seed);
}

std::vector<ExperimentRecord> run_experiments(const Catalog& catalog,
                                              std::span<const std::uint64_t> m_values,
                                              std::uint64_t per_m, std::uint64_t base_seed) {
  std::vector<ExperimentRecord> records;
  for (std::uint64_t m : m_values) {
    for (std::uint64_t k = 0; k < per_m; ++k) {
      const std::uint64_t rng_seed = base_seed + k;
      const NoisyInstance instance = instance_from_catalog(catalog, m, rng_seed);
      const ReductionResult results[] = {reduce_subsets_first(instance, catalog),
                                         reduce_catalog_first(instance, catalog)};
      for (const auto& r : results) {
        if (r.found && (!is_subformula(*r.found, instance.combined) || !ins_certificate(*r.found)))
          throw Error(to_string(r.approach) + " returned an invalid core for m=" +
                      std::to_string(m) + " seed=" + std::to_string(rng_seed));
        records.push_back(ExperimentRecord{rng_seed, catalog.header().n, m, r.approach,
                                           r.found ? r.found->m() : 0, r.visited,
                                           r.membership_checks});
      }
      if (results[0].found.has_value() != results[1].found.has_value())
        throw Error("reduction approaches disagree on success for m=" + std::to_string(m) +
                    " seed=" + std::to_string(rng_seed));
    }
  }
  return records;
}

void emit_experiment_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
  out << "rngSeed,n,m,approach,foundSize,visited,membershipChecks\n";
  for (const auto& r : records)
    out << r.rng_seed << ',' << r.n << ',' << r.m << ',' << to_string(r.approach) << ','
        << r.found_size << ',' << r.visited << ',' << r.membership_checks << '\n';
  out.flush();
  if (!out)
    throw Error("failed writing experiment CSV");
}

void print_trend_table(std::span<const ExperimentRecord> records, std::ostream& out) {
  struct Acc {
    std::uint64_t runs = 0;
    std::uint64_t visited = 0;
  };
  std::map<std::uint64_t, std::map<Approach, Acc>> by_m;
  for (const auto& r : records) {
    auto& acc = by_m[r.m][r.approach];
    ++acc.runs;
    acc.visited += r.visited;
  }
  out << "m,2m,meanVisitedSubsetsFirst,meanVisitedCatalogFirst,subsetsFirstWorstCase,C(2m;m)\n";
  for (const auto& [m, per] : by_m) {
    const auto mean = [&](Approach a) {
      const auto it = per.find(a);
      if (it == per.end() || it->second.runs == 0)
        return std::string("-");
      std::ostringstream s;
      s << std::fixed << std::setprecision(1)
        << static_cast<double>(it->second.visited) / static_cast<double>(it->second.runs);
      return s.str();
    };
    out << m << ',' << 2 * m << ',' << mean(Approach::subsets_first) << ','
        << mean(Approach::catalog_first) << ',' << subsets_first_worst_case(m) << ','
        << noisy_subset_count(m) << '\n';
  }
}

} // namespace cnflab
