#pragma once

/**
 * @file metrics.hpp
 * @brief Evaluation metrics: interval IoU, recall at IoU thresholds, mean
 *        IoU, multiple-choice accuracy, and the Pearson correlation
 *        coefficient. All pure functions.
 */

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace ug {

using Interval = std::pair<double, double>;  // (start_s, end_s), end > start

/// Intersection over union of two time intervals, in [0, 1]; disjoint
/// intervals score 0. Throws on a degenerate interval (end <= start).
double interval_iou(const Interval& a, const Interval& b);

/// Fraction of IoU values at or above the threshold. Throws on empty input.
double recall_at(const std::vector<double>& ious, double threshold);

/// Arithmetic mean of IoU values. Throws on empty input.
double mean_iou(const std::vector<double>& ious);

/// Extracts the predicted option letter from a model answer: the first
/// standalone letter within the option range after stripping whitespace and
/// punctuation ("A.", "(b)", " C" all normalize to that letter). Returns an
/// empty string when no option letter is found.
std::string normalize_mcq_answer(const std::string& answer, int option_count);

/// Fraction of (prediction, gold) pairs whose normalized prediction matches
/// the gold letter. Throws on empty input.
double mcq_accuracy(const std::vector<std::pair<std::string, std::string>>& pred_gold,
                    int option_count = 4);

/// Standard sample Pearson product-moment correlation in [-1, 1]. Throws
/// when fewer than two points are given or either argument has zero
/// variance (the coefficient is undefined there).
double pearson(const Eigen::Ref<const Eigen::VectorXd>& xs,
               const Eigen::Ref<const Eigen::VectorXd>& ys);

}  // namespace ug
