#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

namespace cnflab::cli {

struct RunConfig {
  std::string subcommand;
  int n = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> m_range;
  std::string input_path;
  std::string output_path;
  std::string catalog_path;
  std::optional<std::uint64_t> rng_seed;
  std::size_t partitions = 1;
  std::size_t partition_index = 0;
  double budget_seconds = 600.0;
};

// "a..b" or "a". Throws std::invalid_argument.
std::pair<std::uint64_t, std::uint64_t> parse_m_range(const std::string& text);

// Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cnflab::cli
