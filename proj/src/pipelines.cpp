#include "ug/pipelines.hpp"

#include "ug/fanout.hpp"
#include "ug/log.hpp"
#include "ug/uncertainty.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ug {

namespace {

constexpr int kAnswerMaxTokens = 16;

std::string option_letter(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

// Turns fan-out results into index-aligned scored candidates using the
// sequence-mean entropy of each trace.
template <typename CandidateT>
std::vector<ScoredCandidate> entropy_candidates(const std::vector<CandidateT>& raw,
                                                const std::vector<ScoreAttempt>& attempts,
                                                std::vector<std::string>& flags) {
  std::vector<ScoredCandidate> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ScoredCandidate sc;
    sc.candidate = raw[i];
    sc.kind = ScoreKind::kEntropy;
    if (attempts[i].ok()) {
      sc.score = mean_token_entropy(attempts[i].outcome->trace);
    } else {
      flags.push_back("unscored_candidate:" + std::to_string(i));
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::string try_answer(Backend& answerer, const ScoringRequest& request,
                       std::vector<std::string>& flags) {
  try {
    return answerer.score(request).text;
  } catch (const std::exception& e) {
    flags.push_back("answer_failed");
    log_error(std::string("final answering call failed: ") + e.what());
    return {};
  }
}

}  // namespace

std::string mcq_prompt(const std::string& question, const std::vector<std::string>& options) {
  std::string prompt = question;
  for (std::size_t i = 0; i < options.size(); ++i) {
    prompt += "\n" + option_letter(i) + ". " + options[i];
  }
  if (!options.empty()) {
    prompt += "\nAnswer with the option's letter from the given choices directly.";
  }
  return prompt;
}

std::string grounding_prompt(const std::string& prompt_template, const std::string& event_text) {
  std::string prompt = prompt_template;
  const std::string placeholder = "{action}";
  const auto at = prompt.find(placeholder);
  if (at == std::string::npos) {
    throw std::invalid_argument("grounding prompt template lacks the {action} placeholder");
  }
  prompt.replace(at, placeholder.size(), event_text);
  return prompt;
}

SearchResult ug_search(const std::shared_ptr<const Image>& image, const std::string& question,
                       const std::vector<std::string>& options, const BackendPair& backends,
                       const SearchConfig& cfg, int max_concurrency) {
  if (!image || image->empty()) throw std::invalid_argument("ug_search: no image");
  if (question.empty()) throw std::invalid_argument("ug_search: empty question");

  const auto crops =
      grid_crops(ImageGeometry{image->width, image->height}, cfg.crop_fraction,
                 cfg.stride_fraction);
  const std::string prompt = mcq_prompt(question, options);

  Visual original;
  original.raster = image;

  auto crop_visual = [&](const SpatialCrop& crop) {
    Visual v;
    v.raster = image;
    v.crop = crop;
    v.render_side = cfg.resize_crops ? 0 : crop.side;
    return v;
  };

  std::vector<ScoringRequest> requests;
  requests.reserve(crops.size());
  for (const auto& crop : crops) {
    ScoringRequest req;
    req.visuals = {original, crop_visual(crop)};  // crop is judged in context
    req.prompt = prompt;
    req.max_new_tokens = kAnswerMaxTokens;
    requests.push_back(std::move(req));
  }

  SearchResult result;
  const auto attempts = score_all(*backends.scorer, requests, max_concurrency);
  result.candidates = entropy_candidates(crops, attempts, result.flags);

  const bool any_scored =
      std::any_of(result.candidates.begin(), result.candidates.end(),
                  [](const ScoredCandidate& c) { return c.scored(); });

  ScoringRequest answer_req;
  answer_req.prompt = prompt;
  answer_req.max_new_tokens = kAnswerMaxTokens;
  if (any_scored) {
    result.winning = top_k_lowest(result.candidates, cfg.top_k_crops);
    if (cfg.include_original_in_answer) answer_req.visuals.push_back(original);
    for (int idx : result.winning) {
      answer_req.visuals.push_back(crop_visual(crops[static_cast<std::size_t>(idx)]));
    }
  } else {
    // Nothing scored: degrade to plain inference on the full image.
    result.flags.push_back("degraded_full_image_answer");
    answer_req.visuals.push_back(original);
  }
  result.answer = try_answer(*backends.answerer, answer_req, result.flags);
  return result;
}

SampleResult ug_sample(const FrameSequence& frames, const std::string& question,
                       const std::vector<std::string>& options, const BackendPair& backends,
                       const SampleConfig& cfg, int max_concurrency) {
  if (frames.frame_refs.empty()) throw std::invalid_argument("ug_sample: no frames");
  if (cfg.top_k < 1 || cfg.top_k > cfg.pool_size) {
    throw std::invalid_argument("ug_sample: top_k must be in [1, pool_size]");
  }

  SampleResult result;
  result.pool = uniform_frame_indices(frames.frame_count(), cfg.pool_size);
  const std::string prompt = mcq_prompt(question, options);

  // Candidates are consecutive windows tiling the pooled frames; the
  // default single-frame window makes every pooled frame its own candidate.
  const auto windows = temporal_windows(static_cast<int>(result.pool.size()), cfg.window_len,
                                        cfg.window_len);

  auto frame_visual = [&](int pool_pos) {
    const int ordinal = result.pool[static_cast<std::size_t>(pool_pos)];
    Visual v;
    v.path = frames.frame_refs[static_cast<std::size_t>(ordinal)];
    v.frame_index = ordinal;
    return v;
  };

  std::vector<ScoringRequest> requests;
  requests.reserve(windows.size());
  for (const auto& w : windows) {
    ScoringRequest req;
    for (int p = w.start_frame; p < w.start_frame + w.length; ++p) {
      req.visuals.push_back(frame_visual(p));
    }
    req.prompt = prompt;
    req.max_new_tokens = kAnswerMaxTokens;
    requests.push_back(std::move(req));
  }

  const auto attempts = score_all(*backends.scorer, requests, max_concurrency);
  result.candidates = entropy_candidates(windows, attempts, result.flags);

  const bool any_scored =
      std::any_of(result.candidates.begin(), result.candidates.end(),
                  [](const ScoredCandidate& c) { return c.scored(); });

  std::vector<int> chosen_windows;
  if (any_scored) {
    chosen_windows = top_k_lowest(result.candidates, cfg.top_k);
  } else {
    // Degrade to a uniform spread of top_k windows over the pool.
    result.flags.push_back("degraded_uniform_selection");
    chosen_windows = uniform_frame_indices(static_cast<int>(windows.size()),
                                           std::min<int>(cfg.top_k, static_cast<int>(windows.size())));
  }

  std::set<int> pool_positions;
  for (int wi : chosen_windows) {
    const auto& w = windows[static_cast<std::size_t>(wi)];
    for (int p = w.start_frame; p < w.start_frame + w.length; ++p) pool_positions.insert(p);
  }
  for (int p : pool_positions) {
    result.selected_frames.push_back(result.pool[static_cast<std::size_t>(p)]);
  }

  ScoringRequest answer_req;
  answer_req.prompt = prompt;
  answer_req.max_new_tokens = kAnswerMaxTokens;
  for (int p : pool_positions) answer_req.visuals.push_back(frame_visual(p));
  result.answer = try_answer(*backends.answerer, answer_req, result.flags);
  return result;
}

GroundResult ug_ground(const FrameSequence& frames, const std::string& event_text,
                       Backend& scorer, const GroundConfig& cfg, int max_concurrency) {
  if (frames.frame_refs.empty()) throw std::invalid_argument("ug_ground: no frames");
  if (event_text.empty()) throw std::invalid_argument("ug_ground: empty event text");

  GroundResult result;
  result.windows = temporal_windows(frames.frame_count(), cfg.window_len, cfg.stride);
  const std::string prompt = grounding_prompt(cfg.prompt_template, event_text);

  std::vector<ScoringRequest> requests;
  requests.reserve(result.windows.size());
  for (const auto& w : result.windows) {
    ScoringRequest req;
    for (int f = w.start_frame; f < w.start_frame + w.length; ++f) {
      Visual v;
      v.path = frames.frame_refs[static_cast<std::size_t>(f)];
      v.frame_index = f;
      req.visuals.push_back(std::move(v));
    }
    req.prompt = prompt;
    req.max_new_tokens = 1;
    req.mode = TraceMode::kFirstTokenOnly;
    requests.push_back(std::move(req));
  }

  const auto attempts = score_all(scorer, requests, max_concurrency);
  result.scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(result.windows.size()));
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    if (attempts[i].ok()) {
      const auto& trace = attempts[i].outcome->trace;
      result.scores[static_cast<Eigen::Index>(i)] =
          brc_score(trace.steps.front(), cfg.yes_aliases, cfg.no_aliases);
    } else {
      // Zero is the neutral element of the subarray sum: a missing window
      // neither attracts nor repels the interval.
      result.flags.push_back("unscored_window:" + std::to_string(i));
    }
  }

  const Subarray sub = max_sum_subarray(result.scores);
  const auto& first = result.windows[static_cast<std::size_t>(sub.start)];
  const auto& last = result.windows[static_cast<std::size_t>(sub.end)];
  result.interval.start_s = window_to_seconds(first, frames.fps).first;
  result.interval.end_s = window_to_seconds(last, frames.fps).second;
  result.interval.subarray_sum = sub.sum;
  result.interval.window_start = sub.start;
  result.interval.window_end = sub.end;
  return result;
}

}  // namespace ug
