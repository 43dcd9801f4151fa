#pragma once

// Text formats for formulae.
//
// DIMACS CNF, restricted to clauses of exactly three literals over distinct
// variables:
//
//   c optional comment lines
//   p cnf <n> <m>
//   <l1> <l2> <l3> 0        (m clause lines)
//
// emit_dimacs writes the header and then one clause per line in canonical
// (descending signature) order, literals ordered by variable index, separated
// by single spaces, each line ending in " 0\n". No comments are written.
//
// Signature lines: the descending clause signatures joined by ',' with no
// spaces, e.g. "164,70,25".

#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "cnflab/formula.hpp"

namespace cnflab {

Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);
void emit_dimacs(const Formula& formula, std::ostream& out);
std::string to_dimacs(const Formula& formula);

std::string to_signature_line(const Formula& formula);
// Strict inverse of to_signature_line: values must be strictly descending.
Formula parse_signature_line(int n, std::string_view line);

Formula read_dimacs_file(const std::string& path);

} // namespace cnflab
