#include "cnflab/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cnflab/error.hpp"
#include "cnflab/sat_kernel.hpp"

namespace cnflab {

namespace {

bool lex_less(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string join(std::span<const std::uint64_t> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0)
      out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
}

CatalogHeader parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string version;
  in >> version;
  if (version != "v1")
    throw CatalogError("unsupported catalog format '" + version + "' (expected v1)");
  std::map<std::string, std::string> fields;
  for (std::string token; in >> token;) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw CatalogError("malformed header field '" + token + "'");
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  const auto field = [&](const char* name) -> const std::string& {
    const auto it = fields.find(name);
    if (it == fields.end())
      throw CatalogError(std::string("catalog header lacks '") + name + "'");
    return it->second;
  };
  CatalogHeader h;
  if (!parse_number(field("n"), h.n) || !parse_number(field("mlow"), h.m_low) ||
      !parse_number(field("mhigh"), h.m_high) || !parse_number(field("count"), h.entry_count))
    throw CatalogError("non-numeric catalog header field in '" + line + "'");
  h.kind = parse_catalog_kind(field("kind"));
  if (fields.size() != 5)
    throw CatalogError("unexpected catalog header fields in '" + line + "'");
  return h;
}

} // namespace

std::string to_string(CatalogKind kind) {
  return kind == CatalogKind::ins ? "INS" : "UNSAT";
}

CatalogKind parse_catalog_kind(std::string_view text) {
  if (text == "INS")
    return CatalogKind::ins;
  if (text == "UNSAT")
    return CatalogKind::unsat;
  throw CatalogError("unknown catalog kind '" + std::string(text) + "' (expected INS or UNSAT)");
}

OperationReport& OperationReport::operator+=(const OperationReport& other) noexcept {
  signature_ops += other.signature_ops;
  sort_comparisons += other.sort_comparisons;
  search_probes += other.search_probes;
  verify_comparisons += other.verify_comparisons;
  return *this;
}

Catalog::Catalog(CatalogHeader header, std::vector<std::vector<std::uint64_t>> entries)
    : header_(header) {
  if (header_.format_version != 1)
    throw CatalogError("unsupported catalog version " + std::to_string(header_.format_version));
  if (header_.n < 3 || header_.n > kMaxVariables)
    throw CatalogError("catalog n=" + std::to_string(header_.n) + " out of range");
  if (header_.m_low < 1 || header_.m_low > header_.m_high)
    throw CatalogError("catalog m range " + std::to_string(header_.m_low) + ".." +
                       std::to_string(header_.m_high) + " is empty");
  if (header_.entry_count != entries.size())
    throw CatalogError("catalog header count=" + std::to_string(header_.entry_count) + " but " +
                       std::to_string(entries.size()) + " entries");
  const std::uint64_t lo = min_signature(header_.n);
  const std::uint64_t hi = max_signature(header_.n);
  offsets_.reserve(entries.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const auto where = [&] { return "catalog entry " + std::to_string(i + 1) + " (" + join(e) + ")"; };
    if (e.size() < header_.m_low || e.size() > header_.m_high)
      throw CatalogError(where() + " has length outside the header m range");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] < lo || e[k] > hi)
        throw CatalogError(where() + " holds an out-of-range signature");
      if (k > 0 && e[k] >= e[k - 1])
        throw CatalogError(where() + " is not strictly descending");
      try {
        clause_from_signature(header_.n, e[k]);
      } catch (const MalformedSignature& err) {
        throw CatalogError(where() + ": " + err.what());
      }
    }
    if (i > 0 && !lex_less(entries[i - 1], e))
      throw CatalogError(where() + " is out of order or duplicated");
    values_.insert(values_.end(), e.begin(), e.end());
    offsets_.push_back(values_.size());
  }
}

Catalog Catalog::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw CatalogError("empty catalog");
  const CatalogHeader header = parse_header(line);
  std::vector<std::vector<std::uint64_t>> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::uint64_t> e;
    std::string_view rest(line);
    while (true) {
      const auto comma = std::min(rest.find(','), rest.size());
      std::uint64_t v = 0;
      if (!parse_number(rest.substr(0, comma), v))
        throw CatalogError("catalog line " + std::to_string(lineno) + ": malformed entry '" +
                           line + "'");
      e.push_back(v);
      if (comma == rest.size())
        break;
      rest.remove_prefix(comma + 1);
    }
    entries.push_back(std::move(e));
  }
  return Catalog(header, std::move(entries));
}

Catalog Catalog::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open catalog '" + path + "'");
  return load(in);
}

void Catalog::save(std::ostream& out) const {
  out << "v" << header_.format_version << " n=" << header_.n << " kind=" << to_string(header_.kind)
      << " mlow=" << header_.m_low << " mhigh=" << header_.m_high << " count=" << size() << '\n';
  for (std::size_t i = 0; i < size(); ++i)
    out << join(entry(i)) << '\n';
  out.flush();
  if (!out)
    throw Error("failed writing catalog");
}

bool Catalog::contains(std::span<const std::uint64_t> signatures, OperationReport* report) const {
  OperationReport local;
  bool found = false;
  if (size() > 0) {
    // Entries from `hi` on are > query; entry(lo) is the last one <= query, if any.
    std::size_t lo = 0;
    std::size_t hi = size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      ++local.search_probes;
      if (lex_less(signatures, entry(mid)))
        hi = mid;
      else
        lo = mid;
    }
    const auto candidate = entry(lo);
    if (candidate.size() == signatures.size()) {
      found = true;
      for (std::size_t k = 0; k < candidate.size() && found; ++k) {
        ++local.verify_comparisons;
        found = candidate[k] == signatures[k];
      }
    }
  }
  if (report)
    *report += local;
  return found;
}

std::vector<std::size_t> Catalog::order_by_size() const {
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  // Entries are already lexicographic, so a stable sort on length suffices.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entry(a).size() < entry(b).size();
  });
  return order;
}

LookupResult lookup(const Catalog& catalog, const Formula& formula) {
  if (formula.n() != catalog.header().n)
    throw DomainError("formula has n=" + std::to_string(formula.n()) + ", catalog has n=" +
                      std::to_string(catalog.header().n));
  LookupResult result;
  auto& report = result.report;

  std::vector<std::uint64_t> signatures;
  signatures.reserve(formula.m());
  for (const auto& clause : formula.clauses()) {
    signatures.push_back(signature_of(clause).value);
    report.signature_ops += 2 * static_cast<std::uint64_t>(formula.n());
  }
  std::sort(signatures.begin(), signatures.end(), [&](std::uint64_t a, std::uint64_t b) {
    ++report.sort_comparisons;
    return a > b;
  });
  result.member = catalog.contains(signatures, &report);
  return result;
}

Catalog build_catalog(int n, CatalogKind kind, std::uint64_t m_low, std::uint64_t m_high,
                      const Budget& budget) {
  if (m_low < 1 || m_low > m_high)
    throw DomainError("catalog m range " + std::to_string(m_low) + ".." + std::to_string(m_high) +
                      " is empty");
  const auto universe = clause_universe(n);
  std::vector<std::vector<std::uint64_t>> entries;
  const SubsetVisitor collect = [&](std::span<const std::size_t> positions) {
    std::vector<std::uint64_t> e;
    e.reserve(positions.size());
    // Ascending universe positions give descending signatures.
    for (std::size_t p : positions)
      e.push_back(signature_of(universe[p]).value);
    entries.push_back(std::move(e));
  };
  for (std::uint64_t m = m_low; m <= m_high; ++m) {
    if (kind == CatalogKind::ins)
      enumerate_ins(n, m, budget, collect);
    else
      enumerate_unsat(n, m, budget, collect);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return lex_less(a, b); });
  CatalogHeader header{n, kind, m_low, m_high, entries.size(), 1};
  return Catalog(header, std::move(entries));
}

CatalogHeader build_catalog(int n, CatalogKind kind, std::uint64_t m_low, std::uint64_t m_high,
                            const Budget& budget, std::ostream& sink) {
  const Catalog catalog = build_catalog(n, kind, m_low, m_high, budget);
  catalog.save(sink);
  return catalog.header();
}

void verify_catalog(const Catalog& catalog) {
  const int n = catalog.header().n;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const Formula formula = Formula::from_signatures(n, catalog.entry(i));
    const bool ok = catalog.header().kind == CatalogKind::ins ? ins_certificate(formula).has_value()
                                                              : is_unsat_cover(formula);
    if (!ok)
      throw CatalogError("catalog entry " + std::to_string(i + 1) + " (" + join(catalog.entry(i)) +
                         ") is not " +
                         (catalog.header().kind == CatalogKind::ins ? "INS" : "unsatisfiable"));
  }
}

bool is_subformula(std::span<const std::uint64_t> small, std::span<const std::uint64_t> big,
                   std::uint64_t* comparisons) {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t made = 0;
  bool result = true;
  while (i < small.size()) {
    if (small.size() - i > big.size() - j) {
      result = false;
      break;
    }
    ++made;
    if (big[j] > small[i]) {
      ++j;
    } else if (big[j] == small[i]) {
      ++i;
      ++j;
    } else {
      result = false;
      break;
    }
  }
  if (comparisons)
    *comparisons += made;
  return result;
}

bool is_subformula(const Formula& small, const Formula& big) {
  if (small.n() != big.n())
    return false;
  return is_subformula(small.signature_values(), big.signature_values());
}

} // namespace cnflab
