#pragma once

// Canonical encodings of 3-CNF clauses and formulae.
//
// A clause over n variables is drawn as a 2n-column row with columns
// x1, ~x1, x2, ~x2, ..., xn, ~xn (x1 leftmost). Reading the row as a binary
// number, most significant column first, gives the clause signature. A formula
// is stored as its clauses in strictly descending signature order, so the
// signature tuple is its canonical identity.
//
// Assignments are indexed i = a1 + 2*a2 + 4*a3 + ..., i.e. x1 is the least
// significant bit of the assignment index.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace cnflab {

// Signatures are 2n-bit numbers, so n is capped to keep them in 64 bits.
inline constexpr int kMaxVariables = 32;
// Anything that materializes {0,1}^n (falsify sets, brute force) stops here.
inline constexpr int kMaxExplicitVariables = 24;

struct Signature {
  std::uint64_t value = 0;

  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// Smallest and largest legal clause signature for n variables: 21 and 21 * 2^(2n-5).
std::uint64_t min_signature(int n);
std::uint64_t max_signature(int n);

class Clause {
public:
  // `literals` are DIMACS-style signed variable indices (3 means x3, -3 means ~x3),
  // in any order. Throws InvalidClause on repeated variables, zero, or |lit| > n.
  Clause(int n, std::array<int, 3> literals);

  int n() const noexcept { return n_; }
  // Variable indices in ascending order, with the matching polarity flags.
  const std::array<int, 3>& vars() const noexcept { return vars_; }
  const std::array<bool, 3>& negated() const noexcept { return negated_; }
  std::array<int, 3> literals() const;
  std::size_t negation_count() const;

  bool satisfied_by(std::uint64_t assignment) const noexcept {
    return (assignment & positive_) != 0 || (~assignment & negative_) != 0;
  }
  bool falsified_by(std::uint64_t assignment) const noexcept { return !satisfied_by(assignment); }

  // Human-readable form, e.g. "(x1 | x2 | ~x3)".
  std::string to_string() const;

  friend bool operator==(const Clause& a, const Clause& b) noexcept {
    return a.n_ == b.n_ && a.vars_ == b.vars_ && a.negated_ == b.negated_;
  }

private:
  int n_;
  std::array<int, 3> vars_{};
  std::array<bool, 3> negated_{};
  // Variable masks (bit v-1 for variable v) of the positive and negated literals.
  std::uint64_t positive_ = 0;
  std::uint64_t negative_ = 0;
};

Signature signature_of(const Clause& clause);
// Inverse of signature_of. Throws MalformedSignature unless `value` has exactly
// three set bits in three distinct variable column pairs of a 2n-bit row.
Clause clause_from_signature(int n, std::uint64_t value);

// Set of assignments in {0,1}^n, stored as a bitset of 2^n bits.
class FalsifySet {
public:
  using Word = std::uint64_t;

  explicit FalsifySet(int n);
  static FalsifySet full(int n);

  int n() const noexcept { return n_; }
  std::uint64_t universe_size() const noexcept { return std::uint64_t{1} << n_; }

  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::uint64_t i) noexcept { words_[i >> 6] |= Word{1} << (i & 63); }

  std::uint64_t count() const noexcept;
  bool all() const noexcept;
  bool none() const noexcept;
  bool intersects(const FalsifySet& other) const noexcept;
  std::optional<std::uint64_t> first() const noexcept;
  std::vector<std::uint64_t> indices() const;

  FalsifySet& operator|=(const FalsifySet& other) noexcept;
  FalsifySet& operator&=(const FalsifySet& other) noexcept;
  FalsifySet& subtract(const FalsifySet& other) noexcept;

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }

  friend bool operator==(const FalsifySet& a, const FalsifySet& b) noexcept {
    return a.n_ == b.n_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }

private:
  friend FalsifySet falsify_set(const Clause& clause);

  Word last_word_mask() const noexcept;

  int n_;
  boost::container::small_vector<Word, 1> words_;
};

// Assignments that make all three literals of `clause` false; exactly 2^(n-3) of them.
FalsifySet falsify_set(const Clause& clause);

class Formula {
public:
  // Canonicalizes to descending signature order. Throws DomainError on an empty
  // clause list, mixed n, or duplicate clauses.
  Formula(int n, std::vector<Clause> clauses);
  // Builds from signature values in any order.
  static Formula from_signatures(int n, std::span<const std::uint64_t> values);

  int n() const noexcept { return n_; }
  std::size_t m() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const Clause& operator[](std::size_t j) const noexcept { return clauses_[j]; }

  std::vector<std::uint64_t> signature_values() const;

  // Sub-formula made of the clauses at the given (canonical) positions.
  Formula select(std::span<const std::size_t> positions) const;

  friend bool operator==(const Formula& a, const Formula& b) noexcept {
    return a.n_ == b.n_ && a.clauses_ == b.clauses_;
  }

private:
  int n_;
  std::vector<Clause> clauses_;
};

std::vector<Signature> formula_signature(const Formula& formula);

// Number of logical connectives: 2m disjunctions, m-1 conjunctions, one per negation.
struct SizeMeasure {
  std::uint64_t s = 0;
};

SizeMeasure size_of(const Formula& formula);

// All 8 * C(n,3) clauses over n variables, in descending signature order.
std::vector<Clause> clause_universe(int n);

} // namespace cnflab
