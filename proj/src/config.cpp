#include "ug/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ug {

namespace {

template <typename T>
void maybe(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void apply_backend(const Json& obj, BackendConfig& cfg) {
  maybe(obj, "endpoint_url", cfg.endpoint_url);
  maybe(obj, "model_id", cfg.model_id);
  maybe(obj, "top_logprobs_k", cfg.top_logprobs_k);
  maybe(obj, "max_concurrency", cfg.max_concurrency);
  maybe(obj, "request_timeout_s", cfg.request_timeout_s);
  maybe(obj, "api_key_env", cfg.api_key_source);
  maybe(obj, "retry_attempts", cfg.retry_attempts);
  maybe(obj, "retry_initial_delay_s", cfg.retry_initial_delay_s);
}

Json backend_to_json(const BackendConfig& cfg) {
  Json obj;
  obj["endpoint_url"] = cfg.endpoint_url;
  obj["model_id"] = cfg.model_id;
  obj["top_logprobs_k"] = cfg.top_logprobs_k;
  obj["max_concurrency"] = cfg.max_concurrency;
  obj["request_timeout_s"] = cfg.request_timeout_s;
  obj["api_key_env"] = cfg.api_key_source;
  obj["retry_attempts"] = cfg.retry_attempts;
  obj["retry_initial_delay_s"] = cfg.retry_initial_delay_s;
  return obj;
}

void apply_scene(const Json& obj, SceneParams& p) {
  maybe(obj, "canvas_w", p.canvas_w);
  maybe(obj, "canvas_h", p.canvas_h);
  maybe(obj, "target_min_side", p.target_min_side);
  maybe(obj, "target_max_side", p.target_max_side);
  maybe(obj, "distractor_count", p.distractor_count);
}

Json scene_to_json(const SceneParams& p) {
  return Json{{"canvas_w", p.canvas_w},
              {"canvas_h", p.canvas_h},
              {"target_min_side", p.target_min_side},
              {"target_max_side", p.target_max_side},
              {"distractor_count", p.distractor_count}};
}

void apply_video(const Json& obj, VideoParams& p) {
  maybe(obj, "total_frames", p.total_frames);
  maybe(obj, "fps", p.fps);
  maybe(obj, "frame_w", p.frame_w);
  maybe(obj, "frame_h", p.frame_h);
  maybe(obj, "event_min_len", p.event_min_len);
  maybe(obj, "event_max_len", p.event_max_len);
  maybe(obj, "relevant_count", p.relevant_count);
}

Json video_to_json(const VideoParams& p) {
  return Json{{"total_frames", p.total_frames}, {"fps", p.fps},
              {"frame_w", p.frame_w},           {"frame_h", p.frame_h},
              {"event_min_len", p.event_min_len}, {"event_max_len", p.event_max_len},
              {"relevant_count", p.relevant_count}};
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const Json& obj) {
  if (obj.contains("backend")) {
    const std::string kind = obj.at("backend").get<std::string>();
    if (kind == "oracle") cfg.backend = BackendKind::kOracle;
    else if (kind == "remote") cfg.backend = BackendKind::kRemote;
    else throw std::invalid_argument("config: backend must be 'oracle' or 'remote'");
  }
  if (obj.contains("scorer")) apply_backend(obj.at("scorer"), cfg.scorer);
  if (obj.contains("answerer")) apply_backend(obj.at("answerer"), cfg.answerer);

  if (obj.contains("search")) {
    const Json& s = obj.at("search");
    maybe(s, "crop_fraction", cfg.search.crop_fraction);
    maybe(s, "stride_fraction", cfg.search.stride_fraction);
    maybe(s, "top_k_crops", cfg.search.top_k_crops);
    maybe(s, "resize_crops", cfg.search.resize_crops);
    maybe(s, "include_original_in_answer", cfg.search.include_original_in_answer);
  }
  if (obj.contains("sample")) {
    const Json& s = obj.at("sample");
    maybe(s, "pool_size", cfg.sample.pool_size);
    maybe(s, "window_len", cfg.sample.window_len);
    maybe(s, "top_k", cfg.sample.top_k);
  }
  if (obj.contains("ground")) {
    const Json& s = obj.at("ground");
    maybe(s, "window_len", cfg.ground.window_len);
    maybe(s, "stride", cfg.ground.stride);
    maybe(s, "fps", cfg.ground.fps);
    maybe(s, "yes_aliases", cfg.ground.yes_aliases);
    maybe(s, "no_aliases", cfg.ground.no_aliases);
    maybe(s, "prompt_template", cfg.ground.prompt_template);
  }
  if (obj.contains("oracle")) {
    const Json& s = obj.at("oracle");
    maybe(s, "entropy_ceiling", cfg.oracle.entropy_ceiling);
    maybe(s, "entropy_floor", cfg.oracle.entropy_floor);
    maybe(s, "noise_sigma", cfg.oracle.noise_sigma);
    maybe(s, "brc_noise_sigma", cfg.oracle.brc_noise_sigma);
    maybe(s, "zoom_gain", cfg.oracle.zoom_gain);
  }
  if (obj.contains("synth")) {
    const Json& s = obj.at("synth");
    maybe(s, "scenes", cfg.synth.scenes);
    maybe(s, "sample_videos", cfg.synth.sample_videos);
    maybe(s, "ground_videos", cfg.synth.ground_videos);
    if (s.contains("scene")) apply_scene(s.at("scene"), cfg.synth.scene);
    if (s.contains("sample_video")) apply_video(s.at("sample_video"), cfg.synth.sample_video);
    if (s.contains("ground_video")) apply_video(s.at("ground_video"), cfg.synth.ground_video);
  }
  if (obj.contains("correlate")) {
    const Json& s = obj.at("correlate");
    maybe(s, "ratios", cfg.correlate.ratios);
    maybe(s, "seeds", cfg.correlate.seeds);
  }
  if (obj.contains("io")) {
    const Json& s = obj.at("io");
    maybe(s, "manifest", cfg.manifest_path);
    maybe(s, "out_dir", cfg.out_dir);
    if (s.contains("seed")) {
      cfg.seed = s.at("seed").get<std::uint64_t>();
      cfg.seed_set = true;
    }
  }
  maybe(obj, "items_in_flight", cfg.items_in_flight);
  maybe(obj, "failure_budget", cfg.failure_budget);
  maybe(obj, "logging", cfg.log_level);
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  Json obj = Json::parse(in, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw std::runtime_error("config: " + path + " is not a JSON object");
  }
  apply_config_json(cfg, obj);
  return cfg;
}

Json config_to_json(const RunConfig& cfg) {
  Json obj;
  obj["backend"] = cfg.backend == BackendKind::kOracle ? "oracle" : "remote";
  obj["scorer"] = backend_to_json(cfg.scorer);
  obj["answerer"] = backend_to_json(cfg.answerer);
  obj["search"] = Json{{"crop_fraction", cfg.search.crop_fraction},
                       {"stride_fraction", cfg.search.stride_fraction},
                       {"top_k_crops", cfg.search.top_k_crops},
                       {"resize_crops", cfg.search.resize_crops},
                       {"include_original_in_answer", cfg.search.include_original_in_answer}};
  obj["sample"] = Json{{"pool_size", cfg.sample.pool_size},
                       {"window_len", cfg.sample.window_len},
                       {"top_k", cfg.sample.top_k}};
  obj["ground"] = Json{{"window_len", cfg.ground.window_len},
                       {"stride", cfg.ground.stride},
                       {"fps", cfg.ground.fps},
                       {"yes_aliases", cfg.ground.yes_aliases},
                       {"no_aliases", cfg.ground.no_aliases},
                       {"prompt_template", cfg.ground.prompt_template}};
  obj["oracle"] = Json{{"entropy_ceiling", cfg.oracle.entropy_ceiling},
                       {"entropy_floor", cfg.oracle.entropy_floor},
                       {"noise_sigma", cfg.oracle.noise_sigma},
                       {"brc_noise_sigma", cfg.oracle.brc_noise_sigma},
                       {"zoom_gain", cfg.oracle.zoom_gain}};
  obj["synth"] = Json{{"scenes", cfg.synth.scenes},
                      {"sample_videos", cfg.synth.sample_videos},
                      {"ground_videos", cfg.synth.ground_videos},
                      {"scene", scene_to_json(cfg.synth.scene)},
                      {"sample_video", video_to_json(cfg.synth.sample_video)},
                      {"ground_video", video_to_json(cfg.synth.ground_video)}};
  obj["correlate"] = Json{{"ratios", cfg.correlate.ratios}, {"seeds", cfg.correlate.seeds}};
  obj["io"] = Json{{"manifest", cfg.manifest_path}, {"out_dir", cfg.out_dir}, {"seed", cfg.seed}};
  obj["items_in_flight"] = cfg.items_in_flight;
  obj["failure_budget"] = cfg.failure_budget;
  obj["logging"] = cfg.log_level;
  return obj;
}

std::string config_fingerprint(const RunConfig& cfg) {
  const std::uint64_t h = fnv1a(config_to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace ug
