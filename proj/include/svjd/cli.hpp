#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "svjd/config.hpp"

namespace svjd {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitDomain = 3, kExitConvergence = 4 };

struct RunSpec {
  std::string command;
  std::string config_path;
  std::vector<Override> overrides;
  std::string out_path;  ///< empty writes the CSV to the out stream
  std::optional<std::uint64_t> seed;
  int threads = 0;       ///< 0 keeps the OpenMP default; 1 runs the serial kernels
  std::string axis;      ///< convergence: paths, steps, nodes or zmax
  std::string dump_paths;  ///< price-eu-mc: per-step path dump file
  std::int64_t dump_count = 10;
};

/// Commands accepted by run().
const std::vector<std::string>& commands();

/// Acceptance suite hook for check-suite: writes a pass/fail CSV table to
/// `table`, progress lines to `log`, and returns the number of failures.
using SuiteRunner = std::function<int(std::ostream& table, std::ostream& log)>;
void set_suite_runner(SuiteRunner runner);

/// Executes one command. CSV goes to spec.out_path (or `out` when empty), the
/// one-line summary and diagnostics to `log`. Returns an ExitCode.
int run(const RunSpec& spec, std::ostream& out, std::ostream& log);

/// Rows of a convergence sweep: axis_value,price,stderr_or_quaderr,wall_ms,seed,config_hash.
void convergence_report(const RunConfig& cfg, const std::string& axis, std::ostream& os);

}  // namespace svjd
