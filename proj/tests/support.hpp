#pragma once

#include <vector>

#include "cnflab/formula.hpp"
#include "oracles.hpp"

inline cnflab::Formula make_formula(int n, const std::vector<oracle::Lits>& lits) {
  std::vector<cnflab::Clause> clauses;
  for (const auto& l : lits)
    clauses.emplace_back(n, l);
  return cnflab::Formula(n, std::move(clauses));
}

inline std::vector<oracle::Lits> literals_of(const cnflab::Formula& f) {
  std::vector<oracle::Lits> out;
  for (const auto& c : f.clauses())
    out.push_back(c.literals());
  return out;
}
