#include "cnflab/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "cnflab/error.hpp"

namespace cnflab {

namespace {

bool parse_int(std::string_view token, long long& out) {
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

} // namespace

Formula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long long n = -1;
  long long declared = -1;
  std::vector<Clause> clauses;
  std::set<std::uint64_t> seen;
  std::vector<int> pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == 'c')
      continue;
    if (tokens[0] == "%")
      break;
    if (tokens[0] == "p") {
      if (n >= 0)
        throw ParseError(lineno, "second problem line");
      if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_int(tokens[2], n) ||
          !parse_int(tokens[3], declared) || n < 0 || declared < 0)
        throw ParseError(lineno, "expected 'p cnf <variables> <clauses>'");
      if (n < 3 || n > kMaxVariables)
        throw ParseError(lineno, "variable count " + std::to_string(n) + " outside 3.." +
                                     std::to_string(kMaxVariables));
      continue;
    }
    if (n < 0)
      throw ParseError(lineno, "clause before the 'p cnf' line");
    for (auto token : tokens) {
      long long lit = 0;
      if (!parse_int(token, lit))
        throw ParseError(lineno, "not an integer literal: '" + std::string(token) + "'");
      if (pending.empty())
        pending_line = lineno;
      if (lit != 0) {
        if (lit > n || lit < -n)
          throw ParseError(lineno, "variable index " + std::to_string(lit) + " out of range 1.." +
                                       std::to_string(n));
        pending.push_back(static_cast<int>(lit));
        continue;
      }
      if (pending.size() != 3)
        throw ParseError(pending_line, "clause has " + std::to_string(pending.size()) +
                                           " literals, expected exactly 3");
      try {
        Clause clause(static_cast<int>(n), {pending[0], pending[1], pending[2]});
        if (!seen.insert(signature_of(clause).value).second)
          throw ParseError(pending_line, "duplicate clause " + clause.to_string());
        clauses.push_back(clause);
      } catch (const InvalidClause& e) {
        throw ParseError(pending_line, e.what());
      }
      pending.clear();
    }
  }
  if (n < 0)
    throw ParseError(lineno, "missing 'p cnf' line");
  if (!pending.empty())
    throw ParseError(pending_line, "clause not terminated by 0");
  if (static_cast<long long>(clauses.size()) != declared)
    throw ParseError(lineno, "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(clauses.size()));
  if (clauses.empty())
    throw ParseError(lineno, "formula has no clauses");
  return Formula(static_cast<int>(n), std::move(clauses));
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void emit_dimacs(const Formula& formula, std::ostream& out) {
  out << "p cnf " << formula.n() << ' ' << formula.m() << '\n';
  for (const auto& clause : formula.clauses()) {
    const auto lits = clause.literals();
    out << lits[0] << ' ' << lits[1] << ' ' << lits[2] << " 0\n";
  }
}

std::string to_dimacs(const Formula& formula) {
  std::ostringstream out;
  emit_dimacs(formula, out);
  return out.str();
}

std::string to_signature_line(const Formula& formula) {
  std::string out;
  for (const auto& clause : formula.clauses()) {
    if (!out.empty())
      out += ',';
    out += std::to_string(signature_of(clause).value);
  }
  return out;
}

Formula parse_signature_line(int n, std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
    line.remove_suffix(1);
  std::vector<std::uint64_t> values;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t comma = std::min(line.find(',', start), line.size());
    const auto token = line.substr(start, comma - start);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
      throw MalformedSignature("bad signature token '" + std::string(token) + "'");
    if (!values.empty() && v >= values.back())
      throw MalformedSignature("signatures must be strictly descending: " + std::string(line));
    values.push_back(v);
    start = comma + 1;
  }
  return Formula::from_signatures(n, values);
}

Formula read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  try {
    return parse_dimacs(in);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

} // namespace cnflab
