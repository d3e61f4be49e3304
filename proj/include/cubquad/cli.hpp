#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cubquad::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, budget_refusal = 3 };

struct RunConfig {
  std::string subcommand;
  std::string op;         // operation within the subcommand; empty selects the default
  std::string spec_path;  // system document

  std::optional<std::int64_t> X, Y, H, B, Q, R, s;
  std::optional<double> P;
  std::optional<std::int64_t> q, p, t, h_range, N;
  std::optional<double> alpha, alpha2, alpha3, theta, eta;
  std::string kind = "f";
  std::int64_t cubic = 1, quad = 1;
  std::vector<std::string> factors;  // mixed moment factors "kind:cubic:quad:theta:P:exponent[:R]"
  std::vector<double> ladder;
  std::string restriction = "none";
  std::int64_t grid = 0;   // grid resolution for tables
  double u_max = 10, u_step = 0.1;
  std::size_t samples = 0;  // Monte Carlo samples (0: module default)
  std::string profile = "smoke";

  std::uint64_t seed = 1;
  double max_entries = 5e7;  // ledger cap
  double max_work = 4e10;    // match-phase cap
  double max_cells = 1e7;    // congruence and enumeration cap

  std::string output;  // empty: standard output
  std::string format;  // csv | json; empty picks the subcommand default
};

/// Parses argv into a RunConfig. Throws cubquad::InvalidInput on bad flags;
/// returns nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes the configured subcommand, writing the artifact to config.output
/// (or `out`) and diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping of both stages.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubquad::cli
