// Command implementations behind the executable: run a configured
// simulation, run a study, print equilibrium reports. Exit codes:
// 0 success, 1 validation failure, 2 solver abort.
#pragma once

#include <iosfwd>

#include "nlepi/config.hpp"
#include "nlepi/diagnostics.hpp"

namespace nlepi {

// Environment variable that reroots relative output directories.
inline constexpr const char* kOutputRootEnv = "NLEPI_OUT_ROOT";

// Writes snapshot CSVs ({prefix}_snapshot_NNNN.csv), the diagnostics CSV
// ({prefix}_diagnostics.csv), and {prefix}_summary.txt into the output
// directory. On a solver abort the partial artifacts stay on disk and the
// summary starts with an ABORTED marker line.
int cmd_run(const RunConfig& config, std::ostream& log);

enum class StudyKind { refinement, viscosity };

// Writes {prefix}_{kind}.csv plus {prefix}_study.txt with the fitted
// order / monotonicity verdict.
int cmd_study(const RunConfig& config, StudyKind kind, std::ostream& log);

// Prints the analytic steady-state report; format is "text" or "csv".
int cmd_equilibria(double M, double alpha, double beta, double gamma, const std::string& format,
                   std::ostream& out);

// Helpers shared with tests.
std::string resolve_output_dir(const std::string& directory);
void write_snapshot_csv(const std::string& path, const std::vector<std::string>& compartments,
                        const State& state);
void write_diagnostics_csv(const std::string& path, const std::vector<std::string>& compartments,
                           const DiagnosticSeries& series);

}  // namespace nlepi
