// commands.hpp — experiment commands: compute, write artifacts, exit code

#pragma once

#include "cavitygate/run_config.hpp"

#include <ostream>

namespace cavitygate {

// exit-code contract, shared with the CLI
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_physics_mismatch = 3;
inline constexpr int exit_integration_failure = 4;

// Each command validates its config, writes results.csv / record.json /
// timing.json into config.out_dir, logs a short human summary, and returns
// an exit code.  record.json and results.csv are byte-deterministic for a
// given config; timing.json is not and holds all wall-clock numbers.

// every computational basis input through the ideal gate (n_targets <= 6)
int cmd_truth_table(const RunConfig& config, std::ostream& log);

// lossy gate fidelity over the delta_c/g ratio axis
int cmd_fidelity_sweep(const RunConfig& config, std::ostream& log);

// GHZ preparation, ideal and lossy, scored against the exact target state
int cmd_ghz(const RunConfig& config, std::ostream& log);

// fast invariant suite; nonzero exit names the failing check in the log
int cmd_validate(const RunConfig& config, std::ostream& log);

}  // namespace cavitygate
