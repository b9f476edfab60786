#include "ug/oracle.hpp"

#include "ug/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ug {

namespace {

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

double mix_entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

// The wrong answer is deterministic: the next option letter after gold.
std::string wrong_letter(const std::string& gold, std::size_t option_count) {
  const char g = gold.empty() ? 'A' : gold[0];
  const char next = static_cast<char>('A' + (static_cast<std::size_t>(g - 'A') + 1) % option_count);
  return std::string(1, next);
}

}  // namespace

double crop_visibility(const SyntheticScene& scene, const SpatialCrop& crop,
                       double zoom_gain) {
  const double tx0 = scene.target_x, ty0 = scene.target_y;
  const double tx1 = tx0 + scene.target_w, ty1 = ty0 + scene.target_h;
  const double cx0 = crop.x, cy0 = crop.y;
  const double cx1 = cx0 + crop.side, cy1 = cy0 + crop.side;
  const double ow = std::max(0.0, std::min(tx1, cx1) - std::max(tx0, cx0));
  const double oh = std::max(0.0, std::min(ty1, cy1) - std::max(ty0, cy0));
  const double target_area = static_cast<double>(scene.target_w) * scene.target_h;
  if (target_area <= 0.0) return 0.0;
  const double overlap = (ow * oh) / target_area;
  const double zoom = std::min(1.0, zoom_gain * scene.target_side() / crop.side);
  return overlap * zoom;
}

TokenDistribution distribution_with_entropy(const std::vector<std::string>& support,
                                            std::size_t mode_index, double target) {
  const std::size_t m = support.size();
  if (m < 2) throw std::invalid_argument("distribution_with_entropy: support too small");
  if (mode_index >= m) throw std::invalid_argument("distribution_with_entropy: bad mode index");
  const double h_max = std::log(static_cast<double>(m));
  if (target < 0.0 || target > h_max + 1e-9) {
    throw std::invalid_argument("distribution_with_entropy: target outside [0, ln m]");
  }
  target = clamp(target, 0.0, h_max);

  // p = (1 - lambda) * onehot(mode) + lambda * uniform. Entropy rises
  // monotonically from 0 at lambda=0 to ln m at lambda=1, so bisection
  // always lands within 1e-6 nats.
  auto probs_for = [&](double lambda) {
    std::vector<double> probs(m, lambda / m);
    probs[mode_index] += 1.0 - lambda;
    return probs;
  };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double h = mix_entropy(probs_for(mid));
    if (std::abs(h - target) <= 1e-9) {
      lo = hi = mid;
      break;
    }
    if (h < target) lo = mid;
    else hi = mid;
  }
  const auto probs = probs_for(0.5 * (lo + hi));

  TokenDistribution dist;
  dist.entries.reserve(m);
  for (std::size_t i = 0; i < m; ++i) dist.entries.push_back(TokenEntry{support[i], probs[i]});
  // Rounding can leave the sum a hair off 1; fold the difference into the
  // mode entry, which dominates the mass.
  double total = 0.0;
  for (const auto& e : dist.entries) total += e.prob;
  dist.entries[mode_index].prob += 1.0 - total;
  dist.residual_mass = 0.0;
  return dist;
}

OracleBackend::OracleBackend(OracleWorld world, OracleParams params)
    : world_(std::move(world)), params_(std::move(params)) {
  if (!(params_.entropy_floor < params_.entropy_ceiling)) {
    throw std::invalid_argument("oracle params: entropy floor must lie below the ceiling");
  }
  if (params_.noise_sigma < 0.0 || params_.brc_noise_sigma < 0.0) {
    throw std::invalid_argument("oracle params: noise sigmas must be >= 0");
  }
  if (params_.vocab.size() < 2) {
    throw std::invalid_argument("oracle params: vocab needs at least two letters");
  }
}

std::string OracleBackend::describe() const {
  return std::holds_alternative<SyntheticScene>(world_) ? "oracle(scene)" : "oracle(video)";
}

ScoreOutcome OracleBackend::score(const ScoringRequest& request) {
  if (request.prompt.empty()) throw std::invalid_argument("scoring request: empty prompt");
  if (std::holds_alternative<SyntheticScene>(world_)) {
    return score_scene(std::get<SyntheticScene>(world_), request);
  }
  return score_video(std::get<SyntheticVideo>(world_), request);
}

ScoreOutcome OracleBackend::mcq_outcome(double visibility, const std::string& gold,
                                        std::uint64_t noise_key, std::uint64_t world_seed,
                                        TraceMode mode) const {
  Rng rng(mix_seed(world_seed, noise_key));
  double target = params_.entropy_ceiling -
                  (params_.entropy_ceiling - params_.entropy_floor) * visibility;
  if (params_.noise_sigma > 0.0) target += rng.next_normal(0.0, params_.noise_sigma);
  target = clamp(target, params_.entropy_floor, params_.entropy_ceiling);

  const std::string mode_letter =
      visibility > 0.5 ? gold : wrong_letter(gold, params_.vocab.size());
  std::size_t mode_index = 0;
  for (std::size_t i = 0; i < params_.vocab.size(); ++i) {
    if (params_.vocab[i] == mode_letter) mode_index = i;
  }

  ScoreOutcome out;
  out.text = mode_letter;
  out.trace.steps.push_back(distribution_with_entropy(params_.vocab, mode_index, target));
  out.trace.chosen_tokens.push_back(mode_letter);
  if (mode == TraceMode::kFullTrace) {
    // The end-of-sequence step carries the same per-step entropy target, so
    // the sequence mean equals the target exactly.
    std::vector<std::string> support = params_.vocab;
    support.push_back(params_.eos_token);
    out.trace.steps.push_back(
        distribution_with_entropy(support, support.size() - 1, target));
    out.trace.chosen_tokens.push_back(params_.eos_token);
  }
  return out;
}

ScoreOutcome OracleBackend::score_scene(const SyntheticScene& scene,
                                        const ScoringRequest& request) const {
  if (request.visuals.empty()) {
    throw std::invalid_argument("oracle: scene request carries no visuals");
  }
  // Crop visuals define what the model can see of the target; with several
  // crops the clearest view wins. The accompanying full image never raises
  // a crop's visibility. A request with no crop at all shows the whole
  // canvas. Noise is keyed to the judged crop so scoring stays
  // deterministic per candidate.
  double visibility = -1.0;
  std::uint64_t noise_key = 0x0f0f0f0f;  // whole-canvas view
  for (const auto& v : request.visuals) {
    if (!v.crop) continue;
    const double contribution = crop_visibility(scene, *v.crop, params_.zoom_gain);
    if (contribution > visibility) {
      visibility = contribution;
      noise_key = static_cast<std::uint64_t>(v.crop->index);
    }
  }
  if (visibility < 0.0) {
    const int smaller = std::min(scene.canvas.width, scene.canvas.height);
    visibility = std::min(1.0, params_.zoom_gain * scene.target_side() / smaller);
  }
  return mcq_outcome(visibility, scene.gold_answer, noise_key, scene.seed, request.mode);
}

ScoreOutcome OracleBackend::score_video(const SyntheticVideo& video,
                                        const ScoringRequest& request) const {
  std::vector<int> shown;
  for (const auto& v : request.visuals) {
    if (v.frame_index) shown.push_back(*v.frame_index);
  }
  if (shown.empty()) {
    throw std::invalid_argument("oracle: video request identifies no frames");
  }
  const std::uint64_t noise_key = static_cast<std::uint64_t>(shown.front());

  if (request.mode == TraceMode::kFirstTokenOnly) {
    // Yes/no probe: confident yes exactly when the shown window intersects
    // the event, with clamped gaussian jitter.
    bool intersects = false;
    for (int f : shown) {
      if (f >= video.event_start && f < video.event_end) {
        intersects = true;
        break;
      }
    }
    Rng rng(mix_seed(video.seed, noise_key));
    double b = intersects ? 1.0 : -1.0;
    if (params_.brc_noise_sigma > 0.0) b += rng.next_normal(0.0, params_.brc_noise_sigma);
    b = clamp(b, -1.0, 1.0);

    ScoreOutcome out;
    TokenDistribution dist;
    dist.entries = {TokenEntry{"A", (1.0 + b) / 2.0}, TokenEntry{"B", (1.0 - b) / 2.0}};
    dist.residual_mass = 0.0;
    const std::string chosen = b >= 0.0 ? "A" : "B";
    out.trace.steps.push_back(std::move(dist));
    out.trace.chosen_tokens.push_back(chosen);
    out.text = chosen;
    return out;
  }

  // Entropy probe: visibility is the fraction of shown frames that are
  // relevant to the question.
  int hits = 0;
  for (int f : shown) {
    if (std::binary_search(video.relevant_frames.begin(), video.relevant_frames.end(), f)) {
      ++hits;
    }
  }
  const double visibility = static_cast<double>(hits) / static_cast<double>(shown.size());
  return mcq_outcome(visibility, video.gold_answer, noise_key, video.seed, request.mode);
}

std::map<std::string, OracleWorld> load_worlds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("worlds: cannot open " + path);
  std::map<std::string, OracleWorld> worlds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json obj = Json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw std::runtime_error("worlds line " + std::to_string(line_no) + ": not a JSON object");
    }
    try {
      const std::string id = obj.at("id").get<std::string>();
      const std::string kind = obj.at("kind").get<std::string>();
      if (kind == "scene") {
        SyntheticScene scene;
        scene.seed = obj.at("seed").get<std::uint64_t>();
        scene.canvas =
            ImageGeometry{obj.at("canvas")[0].get<int>(), obj.at("canvas")[1].get<int>()};
        const auto& rect = obj.at("target_rect");
        scene.target_x = rect[0].get<int>();
        scene.target_y = rect[1].get<int>();
        scene.target_w = rect[2].get<int>();
        scene.target_h = rect[3].get<int>();
        scene.gold_answer = obj.at("gold").get<std::string>();
        worlds.emplace(id, std::move(scene));
      } else if (kind == "video") {
        SyntheticVideo video;
        video.seed = obj.at("seed").get<std::uint64_t>();
        video.total_frames = obj.at("total_frames").get<int>();
        video.fps = obj.at("fps").get<double>();
        video.event_start = obj.at("event")[0].get<int>();
        video.event_end = obj.at("event")[1].get<int>();
        for (const auto& f : obj.at("relevant")) video.relevant_frames.push_back(f.get<int>());
        video.gold_answer = obj.at("gold").get<std::string>();
        worlds.emplace(id, std::move(video));
      } else {
        throw std::runtime_error("unknown kind '" + kind + "'");
      }
    } catch (const Json::exception& e) {
      throw std::runtime_error("worlds line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("worlds line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return worlds;
}

}  // namespace ug
