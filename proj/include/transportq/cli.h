#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "transportq/scenarios.h"

namespace transportq {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
};

/// Runs `transportq <subcommand> ...`; `args` excludes the program name.
/// Progress goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV time series of a report. Header:
/// t,psi_norm,unitarity_defect,schrodinger_residual,heisenberg_residual,picture_gap,expectation_re,expectation_im
std::string report_csv(const RunReport& report);
/// JSON document holding the report summary block.
std::string report_summary_json(const RunReport& report, const Scenario& scenario);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string diagnostic;
};

/// Runs the oracle of one built-in scenario, or all of them for "all", on up
/// to `threads` OpenMP workers (0 = runtime default).
std::vector<SuiteResult> verify_suite(const std::string& suite, int threads);

}  // namespace transportq
