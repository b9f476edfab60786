#pragma once

/**
 * @file synth.hpp
 * @brief Deterministic synthetic scenes and videos for desk-scale pipeline
 *        verification.
 *
 * Scenes plant a small colored target shape among gray distractors and ask
 * a four-way color question about it. Videos show a colored marker on a
 * subset of frames (a contiguous event interval for grounding, a sparse
 * relevant set for sampling). Everything is a pure function of the seed:
 * same seed, same bytes.
 */

#include "ug/candidates.hpp"
#include "ug/image.hpp"
#include "ug/json.hpp"
#include "ug/manifest.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ug {

struct SyntheticScene {
  std::uint64_t seed = 0;
  ImageGeometry canvas;
  int target_x = 0, target_y = 0, target_w = 0, target_h = 0;
  std::string target_label;  // e.g. "red square"
  int distractor_count = 0;
  std::string gold_answer;   // option letter of the target color
  std::vector<std::string> options;  // color names in presented order

  int target_side() const { return target_w > target_h ? target_w : target_h; }
  double target_center_x() const { return target_x + target_w / 2.0; }
  double target_center_y() const { return target_y + target_h / 2.0; }
};

struct SyntheticVideo {
  std::uint64_t seed = 0;
  int total_frames = 0;
  double fps = 1.0;
  int event_start = 0;  // half-open [event_start, event_end)
  int event_end = 0;
  std::vector<int> relevant_frames;  // sparse marker frames, all inside the event
  std::string gold_answer;
  std::vector<std::string> options;
};

struct SceneParams {
  int canvas_w = 512;
  int canvas_h = 512;
  int target_min_side = 24;
  int target_max_side = 40;
  int distractor_count = 12;
};

struct VideoParams {
  int total_frames = 240;
  double fps = 3.0;
  int frame_w = 48;
  int frame_h = 32;
  int event_min_len = 60;   // frames
  int event_max_len = 120;
  int relevant_count = 8;   // sparse marker frames within the event
};

struct SceneBundle {
  SyntheticScene scene;
  Image image;
};

struct VideoBundle {
  SyntheticVideo video;
  std::vector<Image> frames;
};

/// Renders a scene for the given seed. Throws when the canvas cannot hold
/// the target.
SceneBundle plant_scene(std::uint64_t seed, const SceneParams& params);

/// Generates a video for the given seed. The event interval and relevant
/// frames are drawn from the seed within the configured ranges.
VideoBundle synth_video(std::uint64_t seed, const VideoParams& params);

/// Target-centered crops at each zoom ratio: side = ratio * min(canvas),
/// clamped inside the canvas. Crop indices follow the ratio list order.
/// Ratios must lie in (0, 1].
std::vector<SpatialCrop> zoom_series(const SyntheticScene& scene,
                                     const std::vector<double>& ratios);

/// The four-way color question asked about a scene's target.
std::string scene_question(const SyntheticScene& scene);

// ---------------------------------------------------------------------------
// Dataset persistence. A dataset directory holds images/, videos/<id>/,
// manifest.jsonl and worlds.jsonl (the per-item generator parameters the
// oracle backend replays).
// ---------------------------------------------------------------------------

/// Writes the scene image under dir/images/ and returns the manifest item
/// (with media path relative to dir).
ManifestItem write_scene_item(const std::string& dir, const std::string& id,
                              const SceneBundle& bundle);

/// Writes frames under dir/videos/<id>/ and returns the manifest item.
/// Grounding items carry the gold interval in seconds; mcq items carry the
/// color question.
ManifestItem write_video_item(const std::string& dir, const std::string& id,
                              const VideoBundle& bundle, bool grounding);

Json world_to_json(const std::string& id, const SyntheticScene& scene);
Json world_to_json(const std::string& id, const SyntheticVideo& video);

}  // namespace ug
