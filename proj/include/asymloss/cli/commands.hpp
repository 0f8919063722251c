#pragma once

#include <ostream>

#include "asymloss/cli/report.hpp"

namespace asymloss::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitAssumptionFailure = 2,
  kExitNumericalFailure = 3,
};

struct AnalysisOutcome {
  AnalysisReport report;
  int exit_code = kExitOk;
};

/// Builds the analysis report. Throws InputError for unusable input and
/// lets NumericError from the solver propagate.
AnalysisOutcome run_analysis(const AnalysisConfig& config);

struct SimulationOutcome {
  SimulationReport report;
  int exit_code = kExitOk;
};

/// Train/test replay of the offset policy: C is fitted on the first half of
/// the error series and both policies are scored on the second half.
SimulationOutcome run_simulation(const AnalysisConfig& config);

// Command entry points: write the report to config.output_path (or `out`),
// diagnostics to `err`, and return the process exit code.
int cmd_analyze(const AnalysisConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const AnalysisConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const AnalysisConfig& config, std::ostream& out, std::ostream& err);

}  // namespace asymloss::cli
