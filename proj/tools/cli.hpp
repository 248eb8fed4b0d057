#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsarma/model.hpp"

namespace bsarma::cli {

// Command-line misuse (unknown flags, malformed specs, missing input).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string command;  // fit, forecast, diagnose, simulate, mc-study, help
  std::string help_text;

  std::string input;
  std::string output;
  ModelOrder order{1, 1, 1, 1, 12};  // mc-study default; other commands require --order
  std::string link = "logit";
  int holdout = 0;
  int horizon = 0;  // 0 = holdout when set, else 12
  std::uint64_t seed = 1;
  int replications = 100;
  int n = 500;          // simulate length
  int b = 0;            // portmanteau lags, 0 = max(10, 2S)
  double level = 0.95;  // confidence level
  std::string study = "estimation";
  int scenario = 1;
  int threads = 0;
  std::vector<int> sizes;
  std::vector<double> deltas;
  std::vector<double> params;  // canonical order; empty = study default
  bool allow_nonconverged = false;
};

// Parses a full argv (excluding the program name). Throws UsageError on any
// malformed invocation; --help yields command "help" with the text filled in.
CliConfig parse_args(const std::vector<std::string>& args);

// Reads a CSV with header `y` or `date,y`; every y must lie strictly inside
// (0,1). Violations are rejected with the offending line number.
SeriesData read_series(const std::string& path);

// Executes the parsed command, writing reports to `out` and problems to
// `err`. Returns the process exit status: 0 on success, 1 on runtime errors,
// 3 when a fit did not converge and --allow-nonconverged was not given.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with usage errors mapped to exit status 2.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace bsarma::cli
