#pragma once

// Persisted, sorted catalog of INS (or unsatisfiable) formulae keyed by their
// signature tuples, and the membership query pipeline: compute the clause
// signatures, sort them, then binary-search the sorted store.
//
// File format (text, '\n' line endings):
//
//   v1 n=<n> kind=<INS|UNSAT> mlow=<a> mhigh=<b> count=<k>
//   u1,u2,...,um          (k lines)
//
// Each entry line is a strictly descending signature tuple. Lines are sorted in
// ascending lexicographic order of the numeric tuples (a proper prefix sorts
// first) and contain no duplicates.

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cnflab/census.hpp"
#include "cnflab/formula.hpp"

namespace cnflab {

enum class CatalogKind { ins, unsat };

std::string to_string(CatalogKind kind);
CatalogKind parse_catalog_kind(std::string_view text);

struct CatalogHeader {
  int n = 0;
  CatalogKind kind = CatalogKind::ins;
  std::uint64_t m_low = 0;
  std::uint64_t m_high = 0;
  std::uint64_t entry_count = 0;
  int format_version = 1;

  friend bool operator==(const CatalogHeader&, const CatalogHeader&) = default;
};

// Abstract operation counts of one query, per pipeline stage.
struct OperationReport {
  // One per signature column read: 2n per clause.
  std::uint64_t signature_ops = 0;
  std::uint64_t sort_comparisons = 0;
  // Tuple comparisons made by the binary search.
  std::uint64_t search_probes = 0;
  // Element comparisons made when checking the located entry against the query.
  std::uint64_t verify_comparisons = 0;

  std::uint64_t search_comparisons() const noexcept { return search_probes + verify_comparisons; }

  OperationReport& operator+=(const OperationReport& other) noexcept;
};

class Catalog {
public:
  // Validates ordering, uniqueness, entry shape and the header against the entries.
  Catalog(CatalogHeader header, std::vector<std::vector<std::uint64_t>> entries);

  static Catalog load(std::istream& in);
  static Catalog load_file(const std::string& path);
  void save(std::ostream& out) const;

  const CatalogHeader& header() const noexcept { return header_; }
  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const std::uint64_t> entry(std::size_t i) const noexcept {
    return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  // Membership of an already canonical (strictly descending) signature tuple.
  bool contains(std::span<const std::uint64_t> signatures, OperationReport* report = nullptr) const;

  // Entry indices ordered by (tuple length, lexicographic).
  std::vector<std::size_t> order_by_size() const;

private:
  CatalogHeader header_;
  std::vector<std::uint64_t> values_;
  std::vector<std::size_t> offsets_;
};

struct LookupResult {
  bool member = false;
  OperationReport report;
};

// Full pipeline on a formula. Throws DomainError when n differs from the catalog's.
LookupResult lookup(const Catalog& catalog, const Formula& formula);

// Enumerates the requested kind for every m in [m_low, m_high].
Catalog build_catalog(int n, CatalogKind kind, std::uint64_t m_low, std::uint64_t m_high,
                      const Budget& budget);
// Same, written to `sink`; returns the header that was written.
CatalogHeader build_catalog(int n, CatalogKind kind, std::uint64_t m_low, std::uint64_t m_high,
                            const Budget& budget, std::ostream& sink);

// Re-checks every entry (INS certificate, or unsatisfiability for UNSAT
// catalogs). Throws CatalogError naming the first bad entry.
void verify_catalog(const Catalog& catalog);

// Every signature of `small` occurs in `big`; one merge pass over both
// descending tuples. `comparisons`, when given, is increased by the number of
// element comparisons made.
bool is_subformula(std::span<const std::uint64_t> small, std::span<const std::uint64_t> big,
                   std::uint64_t* comparisons = nullptr);
bool is_subformula(const Formula& small, const Formula& big);

} // namespace cnflab
