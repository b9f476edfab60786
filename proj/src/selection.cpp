#include "ug/selection.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ug {

int argmin_entropy(const std::vector<ScoredCandidate>& candidates) {
  int best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].scored()) continue;
    const double s = *candidates[i].score;
    if (best < 0 || s < best_score) {
      best = static_cast<int>(i);
      best_score = s;
    }
  }
  if (best < 0) throw std::runtime_error("argmin_entropy: no scored candidates");
  return best;
}

std::vector<int> top_k_lowest(const std::vector<ScoredCandidate>& candidates, int k) {
  if (k < 1) throw std::invalid_argument("top_k_lowest: k must be >= 1");
  std::vector<int> scored;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].scored()) scored.push_back(static_cast<int>(i));
  }
  if (scored.empty()) throw std::runtime_error("top_k_lowest: no scored candidates");

  // Stable sort on score keeps the lowest-index-wins tie rule.
  std::stable_sort(scored.begin(), scored.end(), [&](int a, int b) {
    return *candidates[static_cast<std::size_t>(a)].score <
           *candidates[static_cast<std::size_t>(b)].score;
  });
  scored.resize(std::min<std::size_t>(scored.size(), static_cast<std::size_t>(k)));
  std::sort(scored.begin(), scored.end());
  return scored;
}

Subarray max_sum_subarray(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  const Eigen::Index n = scores.size();
  if (n == 0) throw std::invalid_argument("max_sum_subarray: empty input");

  double max_sum = -std::numeric_limits<double>::infinity();
  double current_sum = 0.0;
  int start = 0, end = 0, temp_start = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (current_sum <= 0.0) {
      current_sum = scores[i];
      temp_start = static_cast<int>(i);
    } else {
      current_sum += scores[i];
    }
    if (current_sum > max_sum) {
      max_sum = current_sum;
      start = temp_start;
      end = static_cast<int>(i);
    }
  }
  return Subarray{start, end, max_sum};
}

}  // namespace ug
