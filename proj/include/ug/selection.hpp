#pragma once

/**
 * @file selection.hpp
 * @brief Selection primitives over scored candidates: entropy argmin,
 *        lowest-k selection, and the maximum-sum subarray scan used for
 *        temporal grounding.
 */

#include "ug/candidates.hpp"

#include <Eigen/Core>

#include <optional>
#include <variant>
#include <vector>

namespace ug {

enum class ScoreKind { kEntropy, kBrc };

/// A candidate (crop or window) together with its uncertainty score.
/// `score` is empty when the backend failed to score the candidate.
struct ScoredCandidate {
  std::variant<SpatialCrop, TemporalWindow> candidate;
  std::optional<double> score;
  ScoreKind kind = ScoreKind::kEntropy;

  bool scored() const { return score.has_value(); }
};

/// Index of the scored candidate with the lowest score; ties break toward
/// the lowest index. Throws when no candidate is scored.
int argmin_entropy(const std::vector<ScoredCandidate>& candidates);

/// Indices of the min(k, #scored) lowest-scored candidates, returned in
/// ascending candidate order so spatial/temporal context is preserved when
/// they are reassembled. Ties break toward the lowest index.
std::vector<int> top_k_lowest(const std::vector<ScoredCandidate>& candidates, int k);

struct Subarray {
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  double sum = 0.0;
};

/// Maximum-sum contiguous subarray in a single left-to-right scan: the
/// running sum restarts at the current element whenever it has dropped to
/// zero or below, and the best interval is updated only on strict
/// improvement. An all-negative input therefore yields the single largest
/// element (earliest on ties). Throws on empty input.
Subarray max_sum_subarray(const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace ug
