#include "cnflab/census.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <istream>
#include <sstream>

#include "cnflab/error.hpp"
#include "cnflab/formula.hpp"
#include "cnflab/sat_kernel.hpp"

namespace cnflab {

namespace {

using Clock = std::chrono::steady_clock;

// Falsify sets of clause_universe(n) as point masks; n <= 4 keeps them in 16 bits.
struct Universe {
  int n = 0;
  std::size_t size = 0;
  std::uint64_t full = 0;
  std::uint64_t per_clause = 0;
  std::vector<std::uint64_t> mask;
  // suffix[i] = union of mask[i..size)
  std::vector<std::uint64_t> suffix;
};

Universe make_universe(int n) {
  if (n < 3 || n > 4)
    throw DomainError("enumeration supports n = 3 or 4, got n=" + std::to_string(n));
  Universe u;
  u.n = n;
  const auto clauses = clause_universe(n);
  u.size = clauses.size();
  u.full = (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  u.per_clause = std::uint64_t{1} << (n - 3);
  for (const auto& c : clauses)
    u.mask.push_back(falsify_set(c).words()[0]);
  u.suffix.assign(u.size + 1, 0);
  for (std::size_t i = u.size; i-- > 0;)
    u.suffix[i] = u.suffix[i + 1] | u.mask[i];
  return u;
}

// C(a, b) for a <= 32.
struct SmallBinomials {
  std::array<std::array<std::uint64_t, 33>, 33> table{};

  SmallBinomials() {
    for (std::size_t a = 0; a <= 32; ++a) {
      table[a][0] = 1;
      for (std::size_t b = 1; b <= a; ++b)
        table[a][b] = table[a - 1][b - 1] + (b < a ? table[a - 1][b] : 0);
    }
  }

  std::uint64_t operator()(std::size_t a, std::size_t b) const { return b > a ? 0 : table[a][b]; }
};

const SmallBinomials& small_binomials() {
  static const SmallBinomials table;
  return table;
}

struct Aborted {};

// Shared between work units. Nodes are charged in batches.
class BudgetGuard {
public:
  explicit BudgetGuard(const Budget& budget)
      : deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(budget.seconds))),
        max_nodes_(budget.max_nodes) {
    if (!(budget.seconds > 0))
      throw DomainError("budget must be positive");
  }

  void charge(std::uint64_t nodes) {
    const auto total = nodes_.fetch_add(nodes, std::memory_order_relaxed) + nodes;
    if (total > max_nodes_ || Clock::now() > deadline_)
      aborted_.store(true, std::memory_order_relaxed);
    if (aborted_.load(std::memory_order_relaxed))
      throw Aborted{};
  }

  bool aborted() const { return aborted_.load(); }
  std::uint64_t nodes() const { return nodes_.load(); }

private:
  Clock::time_point deadline_;
  std::uint64_t max_nodes_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> aborted_{false};
};

constexpr std::uint64_t kChargeBatch = 4096;

// Base of the per-unit searches: node accounting against the shared budget.
class UnitSearch {
public:
  UnitSearch(const Universe& u, std::uint64_t m, BudgetGuard& guard) : u_(u), m_(m), guard_(guard) {}
protected:
  void tick() {
    if (++pending_ == kChargeBatch) {
      pending_ = 0;
      guard_.charge(kChargeBatch);
    }
  }

public:
  void flush() {
    guard_.charge(pending_);
    pending_ = 0;
  }

protected:
  const Universe& u_;
  std::uint64_t m_;
  BudgetGuard& guard_;
  std::uint64_t pending_ = 0;
};

// Counts covering m-subsets. Once the chosen prefix covers every point, all
// completions from the remaining clauses are covers too and are counted in one go.
class UnsatCount : public UnitSearch {
public:
  using UnitSearch::UnitSearch;

  std::uint64_t run(std::size_t first) {
    count_ = 0;
    if (first + m_ <= u_.size && (u_.suffix[first]) == u_.full)
      descend(first + 1, 1, u_.mask[first]);
    flush();
    return count_;
  }

private:
  void descend(std::size_t next, std::uint64_t chosen, std::uint64_t covered) {
    tick();
    if (covered == u_.full) {
      count_ += small_binomials()(u_.size - next, m_ - chosen);
      return;
    }
    if (chosen == m_)
      return;
    const std::uint64_t left = m_ - chosen;
    if (static_cast<std::uint64_t>(std::popcount(u_.full & ~covered)) > left * u_.per_clause)
      return;
    for (std::size_t j = next; j + left <= u_.size; ++j) {
      if ((covered | u_.suffix[j]) != u_.full)
        break;
      descend(j + 1, chosen + 1, covered | u_.mask[j]);
    }
  }

  std::uint64_t count_ = 0;
};

// Lists covering m-subsets one by one.
class UnsatList : public UnitSearch {
public:
  UnsatList(const Universe& u, std::uint64_t m, BudgetGuard& guard, const SubsetVisitor& visit)
      : UnitSearch(u, m, guard), visit_(visit) {}

  void run(std::size_t first) {
    chosen_.assign(1, first);
    if (first + m_ <= u_.size && u_.suffix[first] == u_.full)
      descend(first + 1, u_.mask[first]);
    flush();
  }

private:
  void descend(std::size_t next, std::uint64_t covered) {
    tick();
    if (chosen_.size() == m_) {
      if (covered == u_.full)
        visit_(chosen_);
      return;
    }
    const std::uint64_t left = m_ - chosen_.size();
    if (covered != u_.full &&
        static_cast<std::uint64_t>(std::popcount(u_.full & ~covered)) > left * u_.per_clause)
      return;
    for (std::size_t j = next; j + left <= u_.size; ++j) {
      if ((covered | u_.suffix[j]) != u_.full)
        break;
      chosen_.push_back(j);
      descend(j + 1, covered | u_.mask[j]);
      chosen_.pop_back();
    }
  }

  const SubsetVisitor& visit_;
  std::vector<std::size_t> chosen_;
};

// Irredundant covers: every chosen clause keeps a point no other chosen clause
// falsifies. Adding clauses only removes such points, so a branch where some
// clause has lost all of them is dead.
class InsSearch : public UnitSearch {
public:
  InsSearch(const Universe& u, std::uint64_t m, BudgetGuard& guard, const SubsetVisitor* visit)
      : UnitSearch(u, m, guard), visit_(visit) {}

  std::uint64_t run(std::size_t first) {
    count_ = 0;
    chosen_.assign(1, first);
    if (first + m_ <= u_.size && u_.suffix[first] == u_.full)
      descend(first + 1, u_.mask[first], 0);
    flush();
    return count_;
  }

private:
  void descend(std::size_t next, std::uint64_t covered, std::uint64_t shared) {
    tick();
    if (chosen_.size() == m_) {
      if (covered == u_.full) {
        ++count_;
        if (visit_)
          (*visit_)(chosen_);
      }
      return;
    }
    // A clause added to a full cover has no point of its own.
    if (covered == u_.full)
      return;
    const std::uint64_t left = m_ - chosen_.size();
    if (static_cast<std::uint64_t>(std::popcount(u_.full & ~covered)) > left * u_.per_clause)
      return;
    for (std::size_t j = next; j + left <= u_.size; ++j) {
      if ((covered | u_.suffix[j]) != u_.full)
        break;
      const std::uint64_t mj = u_.mask[j];
      const std::uint64_t overlap = covered & mj;
      const std::uint64_t now_shared = shared | overlap;
      const std::uint64_t own = (covered | mj) & ~now_shared;
      if ((mj & own) == 0)
        continue;
      bool alive = true;
      if (overlap & ~shared) {
        for (std::size_t c : chosen_)
          if ((u_.mask[c] & own) == 0) {
            alive = false;
            break;
          }
      }
      if (!alive)
        continue;
      chosen_.push_back(j);
      descend(j + 1, covered | mj, now_shared);
      chosen_.pop_back();
    }
  }

  const SubsetVisitor* visit_;
  std::vector<std::size_t> chosen_;
  std::uint64_t count_ = 0;
};

std::vector<std::size_t> units_of(const Universe& u, const WorkSplit& split) {
  if (split.partitions == 0 || split.index >= split.partitions)
    throw DomainError("partition index " + std::to_string(split.index) + " outside 0.." +
                      std::to_string(split.partitions == 0 ? 0 : split.partitions - 1));
  std::vector<std::size_t> units;
  for (std::size_t f = split.index; f < u.size; f += split.partitions)
    units.push_back(f);
  return units;
}

// Runs `search(unit)` over all units and merges in unit order.
template <typename Search>
BigInt run_units(const std::vector<std::size_t>& units, BudgetGuard& guard, Execution exec,
                 const std::string& what, Search&& search) {
  std::vector<std::uint64_t> counts(units.size(), 0);
  std::vector<char> done(units.size(), 0);
  const auto count = static_cast<std::ptrdiff_t>(units.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    if (guard.aborted())
      continue;
    try {
      counts[i] = search(units[i]);
      done[i] = 1;
    } catch (const Aborted&) {
    }
  }
  BigInt total = 0;
  std::size_t finished = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    total += counts[i];
    finished += done[i] ? 1 : 0;
  }
  if (guard.aborted() || finished != units.size()) {
    std::ostringstream msg;
    msg << what << ": budget exceeded after " << guard.nodes() << " nodes; " << finished << " of "
        << units.size() << " work units complete, partial count " << total;
    throw BudgetExceeded(msg.str());
  }
  return total;
}

void require_m(int n, std::uint64_t m) {
  const std::uint64_t universe = 8 * binomial(static_cast<std::uint64_t>(n), 3).convert_to<std::uint64_t>();
  if (m > universe)
    throw DomainError("m=" + std::to_string(m) + " exceeds the " + std::to_string(universe) +
                      " clauses available for n=" + std::to_string(n));
}

bool ins_possible(int n, std::uint64_t m) {
  const InsBounds bounds = ins_bounds(n);
  return m >= static_cast<std::uint64_t>(bounds.m_min) && m <= bounds.m_max_int;
}

} // namespace

BigInt count_total(int n, std::uint64_t m) {
  if (n < 3 || n > kMaxVariables)
    throw DomainError("n=" + std::to_string(n) + " outside 3.." + std::to_string(kMaxVariables));
  require_m(n, m);
  return binomial(8 * binomial(static_cast<std::uint64_t>(n), 3).convert_to<std::uint64_t>(), m);
}

BigInt count_unsat_enum(int n, std::uint64_t m, const WorkSplit& split, const Budget& budget,
                        Execution exec) {
  const Universe u = make_universe(n);
  require_m(n, m);
  BudgetGuard guard(budget);
  const auto units = units_of(u, split);
  if (m == 0)
    return 0;
  return run_units(units, guard, exec, "unsat enumeration m=" + std::to_string(m),
                   [&](std::size_t first) {
                     UnsatCount search(u, m, guard);
                     return search.run(first);
                   });
}

BigInt count_unsat_ie(int n, std::uint64_t m) {
  if (n > 4)
    throw DomainError("inclusion-exclusion runs over 2^(2^n) point sets; n=" + std::to_string(n) +
                      " is too large (limit 4)");
  const Universe u = make_universe(n);
  require_m(n, m);
  // avoiding[parity][a] = number of nonempty point sets A with |A| of that parity
  // that exactly `a` clauses miss.
  std::vector<std::array<std::uint64_t, 2>> avoiding(u.size + 1, {0, 0});
  for (std::uint64_t points = 1; points <= u.full; ++points) {
    std::size_t a = 0;
    for (std::uint64_t mask : u.mask)
      a += (mask & points) == 0 ? 1 : 0;
    ++avoiding[a][std::popcount(points) & 1];
  }
  // #sat = sum over nonempty A of (-1)^(|A|+1) C(avoid(A), m)
  BigInt sat = 0;
  for (std::size_t a = 0; a <= u.size; ++a) {
    const BigInt term = binomial(a, m);
    sat += term * avoiding[a][1];
    sat -= term * avoiding[a][0];
  }
  return count_total(n, m) - sat;
}

BigInt count_ins_enum(int n, std::uint64_t m, const WorkSplit& split, const Budget& budget,
                      Execution exec) {
  const Universe u = make_universe(n);
  require_m(n, m);
  BudgetGuard guard(budget);
  const auto units = units_of(u, split);
  if (!ins_possible(n, m))
    return 0;
  return run_units(units, guard, exec, "INS enumeration m=" + std::to_string(m),
                   [&](std::size_t first) {
                     InsSearch search(u, m, guard, nullptr);
                     return search.run(first);
                   });
}

void enumerate_ins(int n, std::uint64_t m, const Budget& budget, const SubsetVisitor& visit) {
  const Universe u = make_universe(n);
  require_m(n, m);
  BudgetGuard guard(budget);
  if (!ins_possible(n, m))
    return;
  try {
    for (std::size_t first = 0; first < u.size; ++first) {
      InsSearch search(u, m, guard, &visit);
      search.run(first);
    }
  } catch (const Aborted&) {
    throw BudgetExceeded("INS listing m=" + std::to_string(m) + ": budget exceeded after " +
                         std::to_string(guard.nodes()) + " nodes");
  }
}

void enumerate_unsat(int n, std::uint64_t m, const Budget& budget, const SubsetVisitor& visit) {
  const Universe u = make_universe(n);
  require_m(n, m);
  BudgetGuard guard(budget);
  if (m == 0)
    return;
  try {
    for (std::size_t first = 0; first < u.size; ++first) {
      UnsatList search(u, m, guard, visit);
      search.run(first);
    }
  } catch (const Aborted&) {
    throw BudgetExceeded("unsat listing m=" + std::to_string(m) + ": budget exceeded after " +
                         std::to_string(guard.nodes()) + " nodes");
  }
}

std::string to_string(CountMethod method) {
  switch (method) {
  case CountMethod::enumeration:
    return "enumeration";
  case CountMethod::inclusion_exclusion:
    return "inclusion-exclusion";
  case CountMethod::both:
    return "both";
  }
  return "?";
}

std::vector<CensusRow> run_census(int n, std::uint64_t m_low, std::uint64_t m_high,
                                  const WorkSplit& split, const Budget& budget,
                                  const CensusOptions& options) {
  if (m_low > m_high)
    throw DomainError("empty m range " + std::to_string(m_low) + ".." + std::to_string(m_high));
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(budget.seconds));
  const auto remaining = [&](std::uint64_t nodes) {
    const double left = std::chrono::duration<double>(deadline - Clock::now()).count();
    if (left <= 0)
      throw BudgetExceeded("census: wall-clock budget of " + std::to_string(budget.seconds) +
                           " s exhausted");
    return Budget{left, nodes};
  };

  std::vector<CensusRow> rows;
  for (std::uint64_t m = m_low; m <= m_high; ++m) {
    CensusRow row;
    row.n = n;
    row.m = m;
    row.total = count_total(n, m);

    UnsatMethod method = split.whole() ? options.unsat_method : UnsatMethod::enumeration;
    std::optional<BigInt> by_enum;
    std::optional<BigInt> by_ie;
    if (method == UnsatMethod::inclusion_exclusion || method == UnsatMethod::both ||
        method == UnsatMethod::automatic)
      by_ie = count_unsat_ie(n, m);
    if (method == UnsatMethod::enumeration || method == UnsatMethod::both) {
      by_enum = count_unsat_enum(n, m, split, remaining(budget.max_nodes), options.exec);
    } else if (method == UnsatMethod::automatic) {
      try {
        by_enum = count_unsat_enum(n, m, split,
                                   remaining(std::min(budget.max_nodes, options.enum_node_limit)),
                                   options.exec);
      } catch (const BudgetExceeded& e) {
        remaining(0);
        if (options.on_note)
          options.on_note("m=" + std::to_string(m) +
                          ": enumeration skipped, inclusion-exclusion only (" + e.what() + ")");
      }
    }
    if (by_enum && by_ie && *by_enum != *by_ie) {
      std::ostringstream msg;
      msg << "unsat counts disagree at n=" << n << " m=" << m << ": enumeration " << *by_enum
          << ", inclusion-exclusion " << *by_ie;
      throw Error(msg.str());
    }
    row.unsat = by_enum ? *by_enum : *by_ie;
    row.method = by_enum && by_ie ? CountMethod::both
                 : by_enum        ? CountMethod::enumeration
                                  : CountMethod::inclusion_exclusion;
    row.ins = count_ins_enum(n, m, split, remaining(budget.max_nodes), options.exec);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_census_csv(std::span<const CensusRow> rows, std::ostream& sink) {
  sink << "n,m,total,unsat,ins,method\n";
  for (const auto& r : rows)
    sink << r.n << ',' << r.m << ',' << r.total << ',' << r.unsat << ',' << r.ins << ','
         << to_string(r.method) << '\n';
  sink.flush();
  if (!sink)
    throw Error("failed writing census CSV");
}

std::vector<CensusRow> parse_census_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,m,total,unsat,ins,method")
    throw ParseError(1, "expected census header 'n,m,total,unsat,ins,method'");
  std::vector<CensusRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
      cells.push_back(cell);
    if (cells.size() != 6)
      throw ParseError(lineno, "expected 6 columns");
    try {
      CensusRow r;
      r.n = std::stoi(cells[0]);
      r.m = std::stoull(cells[1]);
      r.total = BigInt(cells[2]);
      r.unsat = BigInt(cells[3]);
      r.ins = BigInt(cells[4]);
      if (cells[5] == "enumeration")
        r.method = CountMethod::enumeration;
      else if (cells[5] == "inclusion-exclusion")
        r.method = CountMethod::inclusion_exclusion;
      else if (cells[5] == "both")
        r.method = CountMethod::both;
      else
        throw ParseError(lineno, "unknown method '" + cells[5] + "'");
      rows.push_back(std::move(r));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(lineno, "malformed census row");
    }
  }
  return rows;
}

} // namespace cnflab
