#include "cnflab/formula.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "cnflab/error.hpp"

namespace cnflab {

namespace {

void require_variable_count(int n) {
  if (n < 3)
    throw DomainError("3-CNF needs at least 3 variables, got n=" + std::to_string(n));
  if (n > kMaxVariables)
    throw DomainError("n=" + std::to_string(n) + " exceeds the supported maximum of " +
                      std::to_string(kMaxVariables));
}

void require_explicit(int n) {
  if (n > kMaxExplicitVariables)
    throw DomainError("n=" + std::to_string(n) + " is too large to enumerate {0,1}^n (limit " +
                      std::to_string(kMaxExplicitVariables) + ")");
}

// Column bit of literal x_v (negated = false) or ~x_v inside the 2n-bit row.
constexpr unsigned column_bit(int n, int var, bool negated) {
  return static_cast<unsigned>(2 * (n - var) + (negated ? 0 : 1));
}

// Positions inside one 64-bit word whose assignment index has bit b set (b < 6).
constexpr std::uint64_t kLowBitPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

} // namespace

std::uint64_t min_signature(int n) {
  require_variable_count(n);
  return 21;
}

std::uint64_t max_signature(int n) {
  require_variable_count(n);
  return std::uint64_t{21} << (2 * n - 5);
}

Clause::Clause(int n, std::array<int, 3> literals) : n_(n) {
  require_variable_count(n);
  std::sort(literals.begin(), literals.end(),
            [](int a, int b) { return std::abs(a) < std::abs(b); });
  for (std::size_t k = 0; k < 3; ++k) {
    const int lit = literals[k];
    const int var = std::abs(lit);
    if (lit == 0 || var > n)
      throw InvalidClause("literal " + std::to_string(lit) + " outside variables 1.." +
                          std::to_string(n));
    if (k > 0 && var == vars_[k - 1])
      throw InvalidClause("variable x" + std::to_string(var) + " repeated in clause");
    vars_[k] = var;
    negated_[k] = lit < 0;
    (lit < 0 ? negative_ : positive_) |= std::uint64_t{1} << (var - 1);
  }
}

std::array<int, 3> Clause::literals() const {
  std::array<int, 3> out{};
  for (std::size_t k = 0; k < 3; ++k)
    out[k] = negated_[k] ? -vars_[k] : vars_[k];
  return out;
}

std::size_t Clause::negation_count() const {
  return static_cast<std::size_t>(std::count(negated_.begin(), negated_.end(), true));
}

std::string Clause::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t k = 0; k < 3; ++k) {
    if (k > 0)
      out << " | ";
    out << (negated_[k] ? "~x" : "x") << vars_[k];
  }
  out << ')';
  return out.str();
}

Signature signature_of(const Clause& clause) {
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < 3; ++k)
    value |= std::uint64_t{1} << column_bit(clause.n(), clause.vars()[k], clause.negated()[k]);
  return Signature{value};
}

Clause clause_from_signature(int n, std::uint64_t value) {
  require_variable_count(n);
  const auto fail = [&](const std::string& why) {
    return MalformedSignature("signature " + std::to_string(value) + " for n=" +
                              std::to_string(n) + ": " + why);
  };
  if (2 * n < 64 && (value >> (2 * n)) != 0)
    throw fail("bits set beyond the 2n columns");
  if (std::popcount(value) != 3)
    throw fail("expected exactly three set columns");

  std::array<int, 3> literals{};
  std::size_t k = 0;
  for (int var = 1; var <= n; ++var) {
    const bool pos = (value >> column_bit(n, var, false)) & 1u;
    const bool neg = (value >> column_bit(n, var, true)) & 1u;
    if (pos && neg)
      throw fail("both columns of x" + std::to_string(var) + " set");
    if (pos || neg)
      literals[k++] = neg ? -var : var;
  }
  return Clause(n, literals);
}

FalsifySet::FalsifySet(int n) : n_(n) {
  if (n < 0)
    throw DomainError("negative variable count");
  require_explicit(n);
  const std::uint64_t bits = std::uint64_t{1} << n;
  words_.assign((bits + 63) / 64, Word{0});
}

FalsifySet FalsifySet::full(int n) {
  FalsifySet out(n);
  std::fill(out.words_.begin(), out.words_.end(), ~Word{0});
  out.words_.back() &= out.last_word_mask();
  return out;
}

FalsifySet::Word FalsifySet::last_word_mask() const noexcept {
  return n_ >= 6 ? ~Word{0} : (Word{1} << (std::uint64_t{1} << n_)) - 1;
}

std::uint64_t FalsifySet::count() const noexcept {
  std::uint64_t total = 0;
  for (Word w : words_)
    total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool FalsifySet::all() const noexcept {
  for (std::size_t k = 0; k + 1 < words_.size(); ++k)
    if (words_[k] != ~Word{0})
      return false;
  return words_.back() == last_word_mask();
}

bool FalsifySet::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

bool FalsifySet::intersects(const FalsifySet& other) const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k] & other.words_[k])
      return true;
  return false;
}

std::optional<std::uint64_t> FalsifySet::first() const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k] != 0)
      return k * 64 + static_cast<std::uint64_t>(std::countr_zero(words_[k]));
  return std::nullopt;
}

std::vector<std::uint64_t> FalsifySet::indices() const {
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k)
    for (Word w = words_[k]; w != 0; w &= w - 1)
      out.push_back(k * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
  return out;
}

FalsifySet& FalsifySet::operator|=(const FalsifySet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k)
    words_[k] |= other.words_[k];
  return *this;
}

FalsifySet& FalsifySet::operator&=(const FalsifySet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k)
    words_[k] &= other.words_[k];
  return *this;
}

FalsifySet& FalsifySet::subtract(const FalsifySet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k)
    words_[k] &= ~other.words_[k];
  return *this;
}

FalsifySet falsify_set(const Clause& clause) {
  FalsifySet out = FalsifySet::full(clause.n());
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    auto& word = out.words_[w];
    for (std::size_t k = 0; k < 3; ++k) {
      // The literal is false when x_v equals its negation flag.
      const int bit = clause.vars()[k] - 1;
      const bool want = clause.negated()[k];
      if (bit < 6) {
        word &= want ? kLowBitPattern[bit] : ~kLowBitPattern[bit];
      } else if ((((w >> (bit - 6)) & 1u) != 0) != want) {
        word = 0;
      }
    }
  }
  return out;
}

Formula::Formula(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
  require_variable_count(n);
  if (clauses_.empty())
    throw DomainError("a formula needs at least one clause");
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(clauses_.size());
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    if (clauses_[j].n() != n)
      throw DomainError("clause " + clauses_[j].to_string() + " has n=" +
                        std::to_string(clauses_[j].n()) + ", formula has n=" + std::to_string(n));
    keyed.emplace_back(signature_of(clauses_[j]).value, j);
  }
  std::sort(keyed.begin(), keyed.end(), std::greater<>{});
  for (std::size_t j = 1; j < keyed.size(); ++j)
    if (keyed[j].first == keyed[j - 1].first)
      throw DomainError("duplicate clause " + clauses_[keyed[j].second].to_string());
  std::vector<Clause> sorted;
  sorted.reserve(keyed.size());
  for (const auto& [sig, j] : keyed)
    sorted.push_back(clauses_[j]);
  clauses_ = std::move(sorted);
}

Formula Formula::from_signatures(int n, std::span<const std::uint64_t> values) {
  std::vector<Clause> clauses;
  clauses.reserve(values.size());
  for (std::uint64_t v : values)
    clauses.push_back(clause_from_signature(n, v));
  return Formula(n, std::move(clauses));
}

std::vector<std::uint64_t> Formula::signature_values() const {
  std::vector<std::uint64_t> out;
  out.reserve(clauses_.size());
  for (const auto& c : clauses_)
    out.push_back(signature_of(c).value);
  return out;
}

Formula Formula::select(std::span<const std::size_t> positions) const {
  std::vector<Clause> picked;
  picked.reserve(positions.size());
  for (std::size_t j : positions)
    picked.push_back(clauses_.at(j));
  return Formula(n_, std::move(picked));
}

std::vector<Signature> formula_signature(const Formula& formula) {
  std::vector<Signature> out;
  out.reserve(formula.m());
  for (const auto& c : formula.clauses())
    out.push_back(signature_of(c));
  return out;
}

SizeMeasure size_of(const Formula& formula) {
  const std::uint64_t m = formula.m();
  std::uint64_t negations = 0;
  for (const auto& c : formula.clauses())
    negations += c.negation_count();
  return SizeMeasure{2 * m + (m - 1) + negations};
}

std::vector<Clause> clause_universe(int n) {
  require_variable_count(n);
  std::vector<Clause> out;
  out.reserve(static_cast<std::size_t>(8 * n * (n - 1) * (n - 2) / 6));
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int polarity = 0; polarity < 8; ++polarity)
          out.emplace_back(n, std::array<int, 3>{(polarity & 4) ? -a : a, (polarity & 2) ? -b : b,
                                                 (polarity & 1) ? -c : c});
  std::sort(out.begin(), out.end(), [](const Clause& x, const Clause& y) {
    return signature_of(x).value > signature_of(y).value;
  });
  return out;
}

} // namespace cnflab
