#pragma once

/**
 * @file pipelines.hpp
 * @brief The three uncertainty-guided score-then-answer pipelines.
 *
 * Each pipeline follows the same two-stage pattern: candidate visual inputs
 * are scored by the model's own output uncertainty, then the
 * lowest-uncertainty candidates feed one final answering call.
 *
 *  - search:  square sliding-window crops over an image, mean token entropy,
 *             answer from the lowest-entropy crop(s).
 *  - sample:  a uniform candidate-frame pool over a video, mean token
 *             entropy, answer from the k lowest-entropy frames in temporal
 *             order.
 *  - ground:  sliding temporal windows scored by binary response confidence
 *             on a yes/no probe ("is this action depicted"), then the
 *             maximum-sum subarray of the confidence sequence becomes the
 *             predicted time interval.
 */

#include "ug/backend.hpp"
#include "ug/candidates.hpp"
#include "ug/selection.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace ug {

struct SearchConfig {
  double crop_fraction = 1.0 / 6.0;   // of the image's smaller dimension
  double stride_fraction = 0.5;       // of the crop side
  int top_k_crops = 1;
  bool resize_crops = true;           // scale crops back up to source resolution
  bool include_original_in_answer = false;
};

struct SampleConfig {
  int pool_size = 256;
  int window_len = 1;
  int top_k = 8;
};

struct GroundConfig {
  int window_len = 15;
  int stride = 1;
  double fps = 3.0;  // used when an item does not specify its own clock
  std::vector<std::string> yes_aliases{"A", "yes"};
  std::vector<std::string> no_aliases{"B", "no"};
  // {action} is replaced by the event description.
  std::string prompt_template =
      "Given the action: {action}, is this action depicted in the video?\n"
      "A. yes\n"
      "B. no\n"
      "Answer with the option's letter from the given choices directly.";
};

struct GroundingInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  double subarray_sum = 0.0;
  int window_start = 0;  // inclusive window ordinals achieving the sum
  int window_end = 0;
};

struct SearchResult {
  std::string answer;
  std::vector<int> winning;  // crop indices used for the final answer
  std::vector<ScoredCandidate> candidates;
  std::vector<std::string> flags;
};

struct SampleResult {
  std::string answer;
  std::vector<int> selected_frames;  // original frame ordinals, ascending
  std::vector<ScoredCandidate> candidates;
  std::vector<int> pool;  // pooled frame ordinals
  std::vector<std::string> flags;
};

struct GroundResult {
  GroundingInterval interval;
  Eigen::VectorXd scores;  // per-window confidence, unscored windows as 0
  std::vector<TemporalWindow> windows;
  std::vector<std::string> flags;
};

/// The multiple-choice prompt used for both scoring and answering: the
/// question, the lettered options, and a directive to answer with the bare
/// option letter.
std::string mcq_prompt(const std::string& question, const std::vector<std::string>& options);

/// Instantiates the yes/no grounding probe for one event description.
std::string grounding_prompt(const std::string& prompt_template, const std::string& event_text);

SearchResult ug_search(const std::shared_ptr<const Image>& image, const std::string& question,
                       const std::vector<std::string>& options, const BackendPair& backends,
                       const SearchConfig& cfg, int max_concurrency = 1);

SampleResult ug_sample(const FrameSequence& frames, const std::string& question,
                       const std::vector<std::string>& options, const BackendPair& backends,
                       const SampleConfig& cfg, int max_concurrency = 1);

GroundResult ug_ground(const FrameSequence& frames, const std::string& event_text,
                       Backend& scorer, const GroundConfig& cfg, int max_concurrency = 1);

}  // namespace ug
