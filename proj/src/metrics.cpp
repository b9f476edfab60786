#include "ug/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ug {

double interval_iou(const Interval& a, const Interval& b) {
  if (!(a.second > a.first) || !(b.second > b.first)) {
    throw std::invalid_argument("interval_iou: degenerate interval (end <= start)");
  }
  const double inter =
      std::max(0.0, std::min(a.second, b.second) - std::max(a.first, b.first));
  const double uni = (a.second - a.first) + (b.second - b.first) - inter;
  return inter / uni;
}

double recall_at(const std::vector<double>& ious, double threshold) {
  if (ious.empty()) throw std::invalid_argument("recall_at: no records");
  std::size_t hits = 0;
  for (double v : ious) {
    if (v >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ious.size());
}

double mean_iou(const std::vector<double>& ious) {
  if (ious.empty()) throw std::invalid_argument("mean_iou: no records");
  double sum = 0.0;
  for (double v : ious) sum += v;
  return sum / static_cast<double>(ious.size());
}

std::string normalize_mcq_answer(const std::string& answer, int option_count) {
  const char last = static_cast<char>('A' + std::max(0, option_count - 1));
  for (std::size_t i = 0; i < answer.size(); ++i) {
    char c = answer[i];
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (c < 'A' || c > last) continue;
    // Standalone: not embedded in a longer alphanumeric word.
    const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(answer[i - 1]));
    const bool right_ok =
        i + 1 == answer.size() || !std::isalnum(static_cast<unsigned char>(answer[i + 1]));
    if (left_ok && right_ok) return std::string(1, c);
  }
  return {};
}

double mcq_accuracy(const std::vector<std::pair<std::string, std::string>>& pred_gold,
                    int option_count) {
  if (pred_gold.empty()) throw std::invalid_argument("mcq_accuracy: no records");
  std::size_t correct = 0;
  for (const auto& [pred, gold] : pred_gold) {
    const std::string p = normalize_mcq_answer(pred, option_count);
    const std::string g = normalize_mcq_answer(gold, option_count);
    if (!p.empty() && p == g) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pred_gold.size());
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& xs,
               const Eigen::Ref<const Eigen::VectorXd>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  // A constant argument has no defined correlation. Checked element-wise:
  // mean subtraction alone can leave sub-ulp residue on constant input.
  if ((xs.array() == xs[0]).all() || (ys.array() == ys[0]).all()) {
    throw std::domain_error("pearson: undefined for zero-variance input");
  }
  const Eigen::VectorXd dx = xs.array() - xs.mean();
  const Eigen::VectorXd dy = ys.array() - ys.mean();
  const double sx = dx.squaredNorm();
  const double sy = dy.squaredNorm();
  if (sx == 0.0 || sy == 0.0) {
    throw std::domain_error("pearson: undefined for zero-variance input");
  }
  return dx.dot(dy) / std::sqrt(sx * sy);
}

}  // namespace ug
