#include "cnflab/sat_kernel.hpp"

#include <charconv>
#include <sstream>

#include "cnflab/error.hpp"

namespace cnflab {

namespace {

void require_explicit(const Formula& formula) {
  if (formula.n() > kMaxExplicitVariables)
    throw DomainError("brute force over 2^" + std::to_string(formula.n()) +
                      " assignments refused (limit n=" + std::to_string(kMaxExplicitVariables) +
                      ")");
}

// True when no assignment satisfies every clause except the one at `skip`.
bool unsat_without(const Formula& formula, std::size_t skip) {
  const std::uint64_t points = std::uint64_t{1} << formula.n();
  const auto& clauses = formula.clauses();
  for (std::uint64_t v = 0; v < points; ++v) {
    bool satisfied = true;
    for (std::size_t j = 0; j < clauses.size() && satisfied; ++j)
      satisfied = j == skip || clauses[j].satisfied_by(v);
    if (satisfied)
      return false;
  }
  return true;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

} // namespace

CoverState cover_state(const Formula& formula) {
  CoverState state{FalsifySet(formula.n()), {}};
  state.per_clause.reserve(formula.m());
  for (const auto& clause : formula.clauses()) {
    state.per_clause.push_back(falsify_set(clause));
    state.covered |= state.per_clause.back();
  }
  return state;
}

bool is_unsat_cover(const Formula& formula) {
  FalsifySet covered(formula.n());
  for (const auto& clause : formula.clauses())
    covered |= falsify_set(clause);
  return covered.all();
}

bool is_unsat_bruteforce(const Formula& formula) {
  require_explicit(formula);
  return unsat_without(formula, kNoSkip);
}

std::vector<std::size_t> covering_clauses(const Formula& formula, std::uint64_t v) {
  if (formula.n() < 64 && v >= (std::uint64_t{1} << formula.n()))
    throw DomainError("assignment index " + std::to_string(v) + " outside {0,1}^" +
                      std::to_string(formula.n()));
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < formula.m(); ++j)
    if (formula[j].falsified_by(v))
      out.push_back(j);
  return out;
}

std::vector<std::size_t> InsAnalysis::clauses_without_pivot() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < first_pivot.size(); ++j)
    if (!first_pivot[j])
      out.push_back(j);
  return out;
}

std::optional<InsCertificate> InsAnalysis::certificate() const {
  if (!unsat)
    return std::nullopt;
  InsCertificate cert;
  cert.pivots.reserve(first_pivot.size());
  for (const auto& p : first_pivot) {
    if (!p)
      return std::nullopt;
    cert.pivots.push_back(*p);
  }
  return cert;
}

InsAnalysis analyze_ins(const Formula& formula) {
  const CoverState state = cover_state(formula);
  // Points falsified by two or more clauses.
  FalsifySet shared(formula.n());
  FalsifySet seen(formula.n());
  for (const auto& s : state.per_clause) {
    FalsifySet overlap = seen;
    overlap &= s;
    shared |= overlap;
    seen |= s;
  }

  InsAnalysis out;
  out.unsat = state.covered.all();
  out.first_pivot.reserve(formula.m());
  for (const auto& s : state.per_clause) {
    FalsifySet own = s;
    own.subtract(shared);
    out.first_pivot.push_back(own.first());
  }
  return out;
}

std::optional<InsCertificate> ins_certificate(const Formula& formula) {
  return analyze_ins(formula).certificate();
}

bool verify_certificate(const Formula& formula, const InsCertificate& certificate) {
  if (certificate.pivots.size() != formula.m() || !is_unsat_cover(formula))
    return false;
  for (std::size_t j = 0; j < formula.m(); ++j) {
    const auto hits = covering_clauses(formula, certificate.pivots[j]);
    if (hits.size() != 1 || hits.front() != j)
      return false;
  }
  return true;
}

bool is_ins_by_deletion(const Formula& formula) {
  require_explicit(formula);
  if (!unsat_without(formula, kNoSkip))
    return false;
  for (std::size_t j = 0; j < formula.m(); ++j)
    if (unsat_without(formula, j))
      return false;
  return true;
}

std::string to_text(const InsCertificate& certificate) {
  std::ostringstream out;
  for (std::size_t j = 0; j < certificate.pivots.size(); ++j)
    out << (j + 1) << ':' << certificate.pivots[j] << '\n';
  return out.str();
}

InsCertificate parse_certificate(std::string_view text) {
  InsCertificate cert;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const std::size_t eol = std::min(text.find('\n'), text.size());
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(std::min(eol + 1, text.size()));
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      continue;
    const std::size_t colon = line.find(':');
    std::size_t index = 0;
    std::uint64_t pivot = 0;
    const auto a = std::from_chars(line.data(), line.data() + std::min(colon, line.size()), index);
    const bool ok = colon != std::string_view::npos && a.ec == std::errc{} &&
                    a.ptr == line.data() + colon &&
                    std::from_chars(line.data() + colon + 1, line.data() + line.size(), pivot).ptr ==
                        line.data() + line.size() &&
                    colon + 1 < line.size();
    if (!ok)
      throw ParseError(lineno, "expected 'clause:pivot'");
    if (index != cert.pivots.size() + 1)
      throw ParseError(lineno, "clause positions must run 1, 2, 3, ...");
    cert.pivots.push_back(pivot);
  }
  return cert;
}

InsBounds ins_bounds(int n) {
  if (n < 3)
    throw DomainError("INS bounds need n >= 3, got n=" + std::to_string(n));
  if (n > kMaxVariables)
    throw DomainError("n=" + std::to_string(n) + " exceeds the supported maximum");
  const BigInt c3 = binomial(static_cast<std::uint64_t>(n), 3);
  const BigInt points = BigInt(1) << n;
  const BigInt per_clause = BigInt(1) << (n - 3);
  InsBounds out;
  out.m_max_real = Rational(c3 * points, per_clause + c3 - 1);
  out.m_max_int = floor_of(out.m_max_real).convert_to<std::uint64_t>();
  return out;
}

} // namespace cnflab
