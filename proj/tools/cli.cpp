#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "cnflab/catalog.hpp"
#include "cnflab/census.hpp"
#include "cnflab/error.hpp"
#include "cnflab/formula.hpp"
#include "cnflab/io.hpp"
#include "cnflab/reduction.hpp"
#include "cnflab/sat_kernel.hpp"

namespace cnflab::cli {

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("'" + std::string(text) + "' is not a non-negative integer");
  return v;
}

// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw Error("cannot open '" + path + "' for writing");
  fn(file);
  file.flush();
  if (!file)
    throw Error("failed writing '" + path + "'");
}

std::string assignment_text(int n, std::uint64_t v) {
  std::string s = std::to_string(v) + " (";
  for (int i = 1; i <= n; ++i) {
    if (i > 1)
      s += ' ';
    s += "x" + std::to_string(i) + "=" + (((v >> (i - 1)) & 1) ? "1" : "0");
  }
  return s + ")";
}

std::optional<std::uint64_t> first_uncovered(const Formula& f) {
  const FalsifySet covered = cover_state(f).covered;
  for (std::uint64_t v = 0; v < covered.universe_size(); ++v)
    if (!covered.test(v))
      return v;
  return std::nullopt;
}

std::optional<std::uint64_t> first_satisfying(const Formula& f) {
  if (f.n() > kMaxExplicitVariables)
    throw DomainError("brute force supports n <= " + std::to_string(kMaxExplicitVariables));
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << f.n()); ++v) {
    bool all = true;
    for (const auto& c : f.clauses())
      if (c.falsified_by(v)) {
        all = false;
        break;
      }
    if (all)
      return v;
  }
  return std::nullopt;
}

void print_matrix(const Formula& f, std::ostream& out) {
  std::vector<std::string> labels;
  for (int v = 1; v <= f.n(); ++v) {
    labels.push_back("x" + std::to_string(v));
    labels.push_back("~x" + std::to_string(v));
  }
  for (std::size_t k = 0; k < labels.size(); ++k)
    out << (k ? " " : "") << labels[k];
  out << "  signature clause\n";
  for (const auto& c : f.clauses()) {
    const std::uint64_t s = signature_of(c).value;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const int bit = static_cast<int>(labels.size() - 1 - k);
      out << (k ? " " : "") << std::string(labels[k].size() - 1, ' ') << ((s >> bit) & 1);
    }
    out << "  " << s << ' ' << c.to_string() << '\n';
  }
}

void print_reduction(const ReductionResult& r, std::ostream& out) {
  out << to_string(r.approach) << ": ";
  if (r.found)
    out << "found size=" << r.found->m() << " core=" << to_signature_line(*r.found);
  else
    out << "none";
  out << " visited=" << r.visited << " membershipChecks=" << r.membership_checks << '\n';
}

struct Extra {
  std::string sigs;
  bool matrix = false;
  std::string sat_method = "cover";
  std::string unsat_method = "auto";
  bool serial = false;
  std::string kind = "INS";
  bool verify = false;
  std::string approach = "both";
  bool experiment = false;
  std::uint64_t instances = 100;
  std::string census_path;
};

class Runner {
public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void add_commands(CLI::App& app) {
    app.require_subcommand(1);

    auto* sig = app.add_subcommand("sig", "Clause signatures of a formula, or a formula from signatures");
    auto* dimacs = sig->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file to encode");
    auto* sigs = sig->add_option("--sigs", x_.sigs,
                                 "Comma-separated descending signatures to decode into DIMACS (needs --n)");
    dimacs->excludes(sigs);
    sig->add_option("--n", cfg_.n, "Number of variables for --sigs")->check(CLI::Range(3, kMaxVariables));
    sig->add_flag("--matrix", x_.matrix, "Also print the literal-column matrix");
    sig->add_option("--out", cfg_.output_path, "Write to this file instead of standard output");
    sig->callback([this, sig] {
      if (sig->count("--dimacs") + sig->count("--sigs") == 0)
        throw CLI::RequiredError("--dimacs or --sigs");
      if (sig->count("--sigs") && !sig->count("--n"))
        throw CLI::RequiredError("--n (with --sigs)");
      action_ = [this] { cmd_sig(); };
    });

    auto* sat = app.add_subcommand("check-sat", "Decide satisfiability");
    sat->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file")->required();
    sat->add_option("--method", x_.sat_method, "cover, bruteforce or both")
        ->check(CLI::IsMember({"cover", "bruteforce", "both"}));
    sat->callback([this] { action_ = [this] { cmd_check_sat(); }; });

    auto* ins = app.add_subcommand("check-ins", "Decide INS and print a pivot certificate");
    ins->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file")->required();
    ins->add_option("--out", cfg_.output_path, "Write the certificate to this file instead of standard output");
    ins->callback([this] { action_ = [this] { cmd_check_ins(); }; });

    auto* census = app.add_subcommand("census", "Count all, unsatisfiable and INS formulae per m");
    census->add_option("--n", cfg_.n, "Number of variables (3 or 4)")->required();
    add_m_option(census)->required();
    census->add_option("--out", cfg_.output_path, "Write the CSV to this file instead of standard output");
    add_split_options(census);
    add_budget_option(census);
    census->add_option("--unsat-method", x_.unsat_method,
                       "auto, enumeration, inclusion-exclusion or both")
        ->check(CLI::IsMember({"auto", "enumeration", "inclusion-exclusion", "both"}));
    census->add_flag("--serial", x_.serial, "Run the enumeration on one thread");
    census->callback([this] { action_ = [this] { cmd_census(); }; });

    auto* build = app.add_subcommand("build-catalog", "Enumerate INS or unsatisfiable formulae into a catalog");
    build->add_option("--n", cfg_.n, "Number of variables (3 or 4)")->required();
    add_m_option(build)->required();
    build->add_option("--kind", x_.kind, "INS or UNSAT")->check(CLI::IsMember({"INS", "UNSAT"}));
    build->add_option("--out", cfg_.output_path, "Write the catalog to this file instead of standard output");
    add_budget_option(build);
    build->add_flag("--verify", x_.verify, "Re-check every entry after building");
    build->callback([this] { action_ = [this] { cmd_build_catalog(); }; });

    auto* query = app.add_subcommand("query", "Look a formula up in a catalog");
    query->add_option("--catalog", cfg_.catalog_path, "Catalog file")->required();
    query->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file")->required();
    query->callback([this] { action_ = [this] { cmd_query(); }; });

    auto* noisy = app.add_subcommand("gen-noisy", "Add as many random clauses as an INS seed has");
    noisy->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file holding an INS seed")->required();
    noisy->add_option("--seed", cfg_.rng_seed, "Random seed")->required();
    noisy->add_option("--out", cfg_.output_path, "Write the DIMACS to this file instead of standard output");
    noisy->callback([this] { action_ = [this] { cmd_gen_noisy(); }; });

    auto* reduce = app.add_subcommand("reduce", "Find an INS sub-formula with the help of a catalog");
    reduce->add_option("--catalog", cfg_.catalog_path, "INS catalog file")->required();
    reduce->add_option("--dimacs", cfg_.input_path, "DIMACS CNF file to reduce");
    reduce->add_option("--approach", x_.approach, "subsets-first, catalog-first or both")
        ->check(CLI::IsMember({"subsets-first", "catalog-first", "both"}));
    reduce->add_flag("--experiment", x_.experiment,
                     "Run both approaches on --instances seeded noisy instances per m in --m");
    add_m_option(reduce);
    reduce->add_option("--instances", x_.instances, "Instances per m for --experiment")
        ->check(CLI::PositiveNumber);
    reduce->add_option("--seed", cfg_.rng_seed, "Base seed for --experiment; instance k uses seed+k");
    reduce->add_option("--out", cfg_.output_path,
                       "Write the experiment CSV here; the trend table then goes to standard output");
    reduce->callback([this, reduce] {
      if (x_.experiment) {
        for (const char* flag : {"--m", "--seed"})
          if (!reduce->count(flag))
            throw CLI::RequiredError(std::string(flag) + " (with --experiment)");
        if (reduce->count("--dimacs"))
          throw CLI::ExcludesError("--experiment", "--dimacs");
      } else if (!reduce->count("--dimacs")) {
        throw CLI::RequiredError("--dimacs or --experiment");
      }
      action_ = [this] { cmd_reduce(); };
    });

    auto* bounds = app.add_subcommand("bounds", "INS size bounds and the five-term lower bound");
    bounds->add_option("--n", cfg_.n, "Number of variables")->required()->check(CLI::Range(3, kMaxVariables));
    bounds->add_option("--census", x_.census_path, "Census CSV whose ins column is compared with the bound");
    add_m_option(bounds, "Also print C(2m,m) and the subsets-first worst case for these m");
    bounds->callback([this] { action_ = [this] { cmd_bounds(); }; });
  }

  void execute() const { action_(); }

private:
  CLI::Option* add_m_option(CLI::App* app, const std::string& help = "Clause counts, a..b or a") {
    return app
        ->add_option_function<std::string>(
            "--m", [this](const std::string& text) { cfg_.m_range = parse_m_range(text); }, help)
        ->check(CLI::Validator(
            [](std::string& text) -> std::string {
              try {
                parse_m_range(text);
              } catch (const std::exception& e) {
                return e.what();
              }
              return {};
            },
            "a..b", "m range"));
  }

  void add_split_options(CLI::App* app) {
    app->add_option("--partitions", cfg_.partitions, "Split the enumeration into this many parts")
        ->check(CLI::PositiveNumber);
    app->add_option("--partition-index", cfg_.partition_index,
                    "Part computed by this process, 0-based (counts are this part's share)");
  }

  void add_budget_option(CLI::App* app) {
    app->add_option("--budget-seconds", cfg_.budget_seconds, "Wall-clock limit for enumeration")
        ->check(CLI::PositiveNumber);
  }

  Budget budget() const { return Budget{cfg_.budget_seconds, UINT64_MAX}; }

  void cmd_sig() const {
    const Formula f = cfg_.input_path.empty() ? parse_signature_line(cfg_.n, x_.sigs)
                                              : read_dimacs_file(cfg_.input_path);
    emit(cfg_.output_path, out_, [&](std::ostream& o) {
      if (cfg_.input_path.empty())
        emit_dimacs(f, o);
      else
        o << to_signature_line(f) << '\n';
      if (x_.matrix)
        print_matrix(f, o);
    });
  }

  void cmd_check_sat() const {
    const Formula f = read_dimacs_file(cfg_.input_path);
    std::optional<std::uint64_t> witness;
    if (x_.sat_method == "bruteforce") {
      witness = first_satisfying(f);
    } else {
      witness = first_uncovered(f);
      if (x_.sat_method == "both" && first_satisfying(f) != witness)
        throw Error("covering test and brute force disagree");
    }
    if (witness)
      out_ << "SAT " << assignment_text(f.n(), *witness) << '\n';
    else
      out_ << "UNSAT\n";
  }

  void cmd_check_ins() const {
    const Formula f = read_dimacs_file(cfg_.input_path);
    const InsAnalysis analysis = analyze_ins(f);
    if (!analysis.unsat) {
      out_ << "NOT-INS (satisfiable)\n";
      return;
    }
    const auto missing = analysis.clauses_without_pivot();
    if (!missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size(); ++i)
        list += (i ? "," : "") + std::to_string(missing[i] + 1);
      out_ << "NOT-INS (" << (missing.size() == 1 ? "clause " : "clauses ") << list
           << (missing.size() == 1 ? " has" : " have") << " no pivot)\n";
      return;
    }
    const std::string text = to_text(*analysis.certificate());
    if (cfg_.output_path.empty()) {
      out_ << "INS\n" << text;
    } else {
      emit(cfg_.output_path, out_, [&](std::ostream& o) { o << text; });
      out_ << "INS\n";
    }
  }

  void cmd_census() const {
    if (cfg_.partition_index >= cfg_.partitions)
      throw CLI::ValidationError("--partition-index", "must be below --partitions");
    CensusOptions options;
    if (x_.unsat_method == "enumeration")
      options.unsat_method = UnsatMethod::enumeration;
    else if (x_.unsat_method == "inclusion-exclusion")
      options.unsat_method = UnsatMethod::inclusion_exclusion;
    else if (x_.unsat_method == "both")
      options.unsat_method = UnsatMethod::both;
    options.exec = x_.serial ? Execution::serial : Execution::parallel;
    options.on_note = [this](const std::string& note) { err_ << "cnflab census: " << note << '\n'; };
    const auto [lo, hi] = *cfg_.m_range;
    const auto rows = run_census(cfg_.n, lo, hi, WorkSplit{cfg_.partitions, cfg_.partition_index},
                                 budget(), options);
    emit(cfg_.output_path, out_, [&](std::ostream& o) { emit_census_csv(rows, o); });
  }

  void cmd_build_catalog() const {
    const auto [lo, hi] = *cfg_.m_range;
    const Catalog catalog = build_catalog(cfg_.n, parse_catalog_kind(x_.kind), lo, hi, budget());
    if (x_.verify)
      verify_catalog(catalog);
    emit(cfg_.output_path, out_, [&](std::ostream& o) { catalog.save(o); });
    if (!cfg_.output_path.empty())
      out_ << "wrote " << catalog.size() << " entries to " << cfg_.output_path << '\n';
  }

  void cmd_query() const {
    const Catalog catalog = Catalog::load_file(cfg_.catalog_path);
    const Formula f = read_dimacs_file(cfg_.input_path);
    const LookupResult r = lookup(catalog, f);
    out_ << (r.member ? "MEMBER" : "NOT-MEMBER") << '\n';
    out_ << "signatureOps=" << r.report.signature_ops << " sortComparisons=" << r.report.sort_comparisons
         << " searchProbes=" << r.report.search_probes
         << " verifyComparisons=" << r.report.verify_comparisons << '\n';
  }

  void cmd_gen_noisy() const {
    const Formula seed = read_dimacs_file(cfg_.input_path);
    const NoisyInstance instance = gen_noisy(seed, *cfg_.rng_seed);
    emit(cfg_.output_path, out_, [&](std::ostream& o) { emit_dimacs(instance.combined, o); });
  }

  void cmd_reduce() const {
    const Catalog catalog = Catalog::load_file(cfg_.catalog_path);
    if (x_.experiment) {
      std::vector<std::uint64_t> ms;
      for (std::uint64_t m = cfg_.m_range->first; m <= cfg_.m_range->second; ++m)
        ms.push_back(m);
      const auto records = run_experiments(catalog, ms, x_.instances, *cfg_.rng_seed);
      emit(cfg_.output_path, out_, [&](std::ostream& o) { emit_experiment_csv(records, o); });
      if (!cfg_.output_path.empty())
        print_trend_table(records, out_);
      return;
    }
    const Formula f = read_dimacs_file(cfg_.input_path);
    if (x_.approach != "catalog-first")
      print_reduction(reduce_subsets_first(f, catalog), out_);
    if (x_.approach != "subsets-first")
      print_reduction(reduce_catalog_first(f, catalog), out_);
  }

  void cmd_bounds() const {
    const InsBounds b = ins_bounds(cfg_.n);
    if (cfg_.n < 4 && !x_.census_path.empty())
      throw DomainError("the five-term bound needs n >= 4");
    std::optional<BigInt> observed;
    if (!x_.census_path.empty()) {
      std::ifstream in(x_.census_path);
      if (!in)
        throw Error("cannot open census '" + x_.census_path + "'");
      try {
        const auto rows = parse_census_csv(in);
        observed = observed_ins_sum(rows, cfg_.n);
      } catch (const ParseError& e) {
        throw Error(x_.census_path + ": " + e.what());
      }
    }
    out_ << "m_min=" << b.m_min << '\n';
    out_ << "m_max=" << b.m_max_real << '\n';
    out_ << "m_max_floor=" << b.m_max_int << '\n';
    if (cfg_.m_range)
      for (std::uint64_t m = cfg_.m_range->first; m <= cfg_.m_range->second; ++m)
        out_ << "m=" << m << " C(2m;m)=" << noisy_subset_count(m)
             << " subsetsFirstWorstCase=" << subsets_first_worst_case(m) << '\n';
    if (cfg_.n >= 4)
      print_bound_report(appendix_bound(cfg_.n, observed), out_);
  }

  std::ostream& out_;
  std::ostream& err_;
  RunConfig cfg_;
  Extra x_;
  std::function<void()> action_;
};

} // namespace

std::pair<std::uint64_t, std::uint64_t> parse_m_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto m = parse_u64(text);
    return {m, m};
  }
  const auto lo = parse_u64(std::string_view(text).substr(0, dots));
  const auto hi = parse_u64(std::string_view(text).substr(dots + 2));
  if (lo > hi)
    throw std::invalid_argument("empty range '" + text + "'");
  return {lo, hi};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"3-CNF signature, satisfiability, INS census and reduction tool", "cnflab"};
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  Runner runner(out, err);
  runner.add_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "cnflab: " << e.what() << " (see --help)\n";
    return 2;
  }
  try {
    runner.execute();
  } catch (const CLI::ParseError& e) {
    err << "cnflab: " << e.what() << " (see --help)\n";
    return 2;
  } catch (const std::exception& e) {
    err << "cnflab: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace cnflab::cli
