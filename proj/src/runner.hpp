#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace ergolab {

struct RunResult {
  ergolab_status status = ERGOLAB_OK;
  std::string message;
};

// Experiment driver behind the CLI: loads the config, runs one command
// (exponents | solve | explosive | ergodic | rate | verify), writes
// profile.csv / report.txt / run.log under out_dir and prints the summary
// line(s) to `out`. Solver failures persist the partial report and are
// returned as a status, not thrown.
RunResult run_command(const std::string& command, const std::string& config_path,
                      const std::string& out_dir, int grid_n_override,
                      std::ostream& out);

}  // namespace ergolab
