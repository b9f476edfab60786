#pragma once

/**
 * @file fanout.hpp
 * @brief Fans candidate scoring requests out to a backend with bounded
 *        parallelism.
 *
 * Results land in a vector indexed by request position, so downstream
 * selection never depends on completion order. A candidate whose request
 * ultimately fails with a backend error is returned unscored (with the
 * error message) instead of aborting the sweep; one flaky request must not
 * invalidate a few hundred sibling candidates.
 */

#include "ug/backend.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ug {

struct ScoreAttempt {
  std::optional<ScoreOutcome> outcome;  // empty when the backend failed
  std::string error;                    // failure description when empty
  bool ok() const { return outcome.has_value(); }
};

/// Scores every request, running at most max_concurrency requests in
/// flight at once. Results are positioned by request index.
std::vector<ScoreAttempt> score_all(Backend& backend,
                                    const std::vector<ScoringRequest>& requests,
                                    int max_concurrency);

}  // namespace ug
