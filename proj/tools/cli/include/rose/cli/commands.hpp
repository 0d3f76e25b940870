#pragma once

#include "rose/cli/config.hpp"

#include <iosfwd>

namespace rose::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

/// Runs the Monte Carlo study described by cfg.simulation; prints the table to
/// `out` and writes the results CSV to cfg.out (to `out` when empty).
int cmd_simulate(const RunConfig& cfg, std::ostream& out);

/// Standardizes the data, runs Bonferroni-adjusted inference over the
/// requested targets and writes feature,estimate,ci_lo,ci_hi,adjusted_alpha,
/// significant to cfg.out (to `out` when empty), followed by a summary.
int cmd_infer(const RunConfig& cfg, std::ostream& out);

/// Residuals of the initial fit on the standardized data: writes
/// <out>_residuals.csv, <out>_histogram.csv and <out>_qq.csv and prints the
/// sample skewness.
int cmd_diagnose(const RunConfig& cfg, std::ostream& out);

/// Ranks features by the configured screening statistic and prints the top
/// `keep`; also writes rank,feature,statistic to cfg.out when set.
int cmd_screen(const RunConfig& cfg, std::ostream& out);

/// Full command line: parses flags, applies them over the config file and
/// dispatches. Errors are reported on `err` and mapped to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rose::cli
