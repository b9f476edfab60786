#pragma once

/**
 * @file cli.hpp
 * @brief Command implementations behind the `ug` binary.
 *
 * Exit codes are stable:
 *   0  success
 *   2  configuration error (bad flags, missing files, refused overwrite)
 *   3  failure budget exceeded (too many items failed at the backend)
 *   4  validation failure (malformed manifest or undefined statistics)
 */

#include "ug/config.hpp"
#include "ug/manifest.hpp"

#include <string>

namespace ug {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBudgetExceeded = 3;
inline constexpr int kExitValidation = 4;

/// Runs the pipeline matching `task` over the manifest's items of that
/// task, writes run_<task>.jsonl, summary.json, summary.txt and config.json
/// into the output directory, and prints the summary table.
int cmd_run(const RunConfig& cfg, TaskKind task);

/// Generates a synthetic dataset (scenes + videos + manifest + worlds
/// sidecar) into the output directory. Refuses a non-empty directory unless
/// force is set. Requires an explicit seed.
int cmd_synth(const RunConfig& cfg, bool force);

/// Sweeps target-centered zoom crops over seeded scenes with the oracle,
/// writes correlate.csv / correlate.json, and prints the entropy-zoom and
/// entropy-accuracy correlation coefficients.
int cmd_correlate(const RunConfig& cfg);

}  // namespace ug
