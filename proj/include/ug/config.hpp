#pragma once

/**
 * @file config.hpp
 * @brief Run configuration: JSON file loading, flag overrides, and the
 *        reproducibility fingerprint.
 *
 * The config file is a single JSON object; every section and field is
 * optional and falls back to the built-in defaults. Secrets never appear
 * here: backend sections name the environment variable that holds the API
 * key, not the key itself.
 */

#include "ug/backend.hpp"
#include "ug/json.hpp"
#include "ug/oracle.hpp"
#include "ug/pipelines.hpp"
#include "ug/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ug {

enum class BackendKind { kOracle, kRemote };

struct SynthConfig {
  int scenes = 20;
  int sample_videos = 0;
  int ground_videos = 0;
  SceneParams scene;
  VideoParams sample_video;   // short videos with sparse relevant frames
  VideoParams ground_video;   // longer videos with a contiguous event

  SynthConfig() {
    sample_video.total_frames = 240;
    sample_video.event_min_len = 60;
    sample_video.event_max_len = 120;
    sample_video.relevant_count = 8;
    ground_video.total_frames = 330;
    ground_video.event_min_len = 200;
    ground_video.event_max_len = 256;
    ground_video.relevant_count = 0;
  }
};

struct CorrelateConfig {
  std::vector<double> ratios{1.0, 0.5, 0.25, 0.125};
  int seeds = 50;
};

struct RunConfig {
  BackendKind backend = BackendKind::kOracle;
  BackendConfig scorer;
  BackendConfig answerer;
  SearchConfig search;
  SampleConfig sample;
  GroundConfig ground;
  OracleParams oracle;
  SynthConfig synth;
  CorrelateConfig correlate;

  std::string manifest_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;  // synthetic commands require an explicit seed

  int items_in_flight = 1;
  double failure_budget = 0.0;  // tolerated fraction of failed items
  std::string log_level = "warn";
};

/// Loads a config file, or returns defaults when path is empty. Throws on
/// unreadable files or malformed JSON.
RunConfig load_config(const std::string& path);

/// Applies one config JSON object on top of cfg (used for both file loading
/// and programmatic overrides).
void apply_config_json(RunConfig& cfg, const Json& obj);

/// Canonical JSON form of the resolved config; this is what gets persisted
/// into the run directory and hashed.
Json config_to_json(const RunConfig& cfg);

/// FNV-1a hash of the canonical form, as a 16-digit hex string. Two runs
/// with equal fingerprints and the oracle backend reproduce bit-for-bit.
std::string config_fingerprint(const RunConfig& cfg);

}  // namespace ug
