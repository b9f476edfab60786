#include "ug/synth.hpp"

#include "ug/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace ug {

namespace {

struct NamedColor {
  const char* name;
  float r, g, b;
};

// Target palette; distractors stay on gray/brown tones so the color
// question has a unique answer.
constexpr NamedColor kTargetColors[] = {
    {"red", 0.85f, 0.10f, 0.10f},
    {"green", 0.10f, 0.65f, 0.15f},
    {"blue", 0.15f, 0.25f, 0.85f},
    {"yellow", 0.90f, 0.85f, 0.10f},
};

constexpr const char* kShapes[] = {"square", "disc", "triangle"};

void draw_shape(Image& img, int shape, int x, int y, int w, int h, const NamedColor& c) {
  switch (shape) {
    case 0: fill_rect(img, x, y, w, h, c.r, c.g, c.b); break;
    case 1: fill_circle(img, x + w / 2, y + h / 2, std::min(w, h) / 2, c.r, c.g, c.b); break;
    default: fill_triangle(img, x, y, w, h, c.r, c.g, c.b); break;
  }
}

bool rects_overlap(int ax, int ay, int aw, int ah, int bx, int by, int bw, int bh) {
  return ax < bx + bw && bx < ax + aw && ay < by + bh && by < ay + ah;
}

std::string frame_name(int index) {
  std::ostringstream os;
  os << "frame_";
  os.width(5);
  os.fill('0');
  os << index << ".png";
  return os.str();
}

}  // namespace

SceneBundle plant_scene(std::uint64_t seed, const SceneParams& params) {
  if (params.canvas_w < params.target_max_side + 8 ||
      params.canvas_h < params.target_max_side + 8) {
    throw std::invalid_argument("plant_scene: canvas too small for the target");
  }
  Rng rng(mix_seed(seed, 0x5ce7e));

  SceneBundle bundle;
  SyntheticScene& scene = bundle.scene;
  scene.seed = seed;
  scene.canvas = ImageGeometry{params.canvas_w, params.canvas_h};

  const int color_idx = rng.next_int(0, 3);
  const int shape_idx = rng.next_int(0, 2);
  const NamedColor& color = kTargetColors[color_idx];

  scene.target_w = rng.next_int(params.target_min_side, params.target_max_side);
  scene.target_h = scene.target_w;  // square-ish targets keep visibility simple
  scene.target_x = rng.next_int(4, params.canvas_w - scene.target_w - 4);
  scene.target_y = rng.next_int(4, params.canvas_h - scene.target_h - 4);
  scene.target_label = std::string(color.name) + " " + kShapes[shape_idx];
  scene.distractor_count = params.distractor_count;

  // Present the four colors in seeded order; the gold letter indexes the
  // target's true color.
  std::vector<int> order{0, 1, 2, 3};
  rng.shuffle(order);
  for (std::size_t i = 0; i < order.size(); ++i) {
    scene.options.push_back(kTargetColors[order[i]].name);
    if (order[i] == color_idx) scene.gold_answer = std::string(1, static_cast<char>('A' + i));
  }

  // Background with mild deterministic texture.
  const float bg = 0.82f;
  bundle.image = Image::filled(params.canvas_w, params.canvas_h, bg, bg, bg);
  for (int i = 0; i < 40; ++i) {
    const int bx = rng.next_int(0, params.canvas_w - 1);
    const int by = rng.next_int(0, params.canvas_h - 1);
    const int bw = rng.next_int(8, 48);
    const int bh = rng.next_int(8, 48);
    const float shade = 0.74f + 0.1f * static_cast<float>(rng.next_double());
    fill_rect(bundle.image, bx, by, bw, bh, shade, shade, shade);
  }

  for (int i = 0; i < params.distractor_count; ++i) {
    const int dw = rng.next_int(params.target_min_side, params.target_max_side * 2);
    const int dh = rng.next_int(params.target_min_side, params.target_max_side * 2);
    const int dx = rng.next_int(0, std::max(0, params.canvas_w - dw));
    const int dy = rng.next_int(0, std::max(0, params.canvas_h - dh));
    if (rects_overlap(dx, dy, dw, dh, scene.target_x - 4, scene.target_y - 4,
                      scene.target_w + 8, scene.target_h + 8)) {
      continue;  // never occlude the target
    }
    const float shade = 0.35f + 0.3f * static_cast<float>(rng.next_double());
    draw_shape(bundle.image, rng.next_int(0, 2), dx, dy, dw, dh,
               NamedColor{"", shade, shade * 0.9f, shade * 0.8f});
  }

  draw_shape(bundle.image, shape_idx, scene.target_x, scene.target_y, scene.target_w,
             scene.target_h, color);
  return bundle;
}

VideoBundle synth_video(std::uint64_t seed, const VideoParams& params) {
  if (params.total_frames < 1) throw std::invalid_argument("synth_video: no frames");
  if (params.event_min_len > params.event_max_len ||
      params.event_max_len > params.total_frames) {
    throw std::invalid_argument("synth_video: event length range invalid");
  }
  Rng rng(mix_seed(seed, 0x71de0));

  VideoBundle bundle;
  SyntheticVideo& video = bundle.video;
  video.seed = seed;
  video.total_frames = params.total_frames;
  video.fps = params.fps;

  const int event_len = rng.next_int(params.event_min_len, params.event_max_len);
  video.event_start = rng.next_int(0, params.total_frames - event_len);
  video.event_end = video.event_start + event_len;

  const int color_idx = rng.next_int(0, 3);
  const NamedColor& color = kTargetColors[color_idx];
  std::vector<int> order{0, 1, 2, 3};
  rng.shuffle(order);
  for (std::size_t i = 0; i < order.size(); ++i) {
    video.options.push_back(kTargetColors[order[i]].name);
    if (order[i] == color_idx) video.gold_answer = std::string(1, static_cast<char>('A' + i));
  }

  // Sparse relevant frames inside the event, for sampling-style questions.
  const int wanted = std::min(params.relevant_count, event_len);
  std::vector<int> event_frames(static_cast<std::size_t>(event_len));
  for (int i = 0; i < event_len; ++i) event_frames[static_cast<std::size_t>(i)] = video.event_start + i;
  rng.shuffle(event_frames);
  video.relevant_frames.assign(event_frames.begin(), event_frames.begin() + wanted);
  std::sort(video.relevant_frames.begin(), video.relevant_frames.end());

  // Frames: dark background, a progress tick, the event bar, and the
  // colored marker on relevant frames.
  bundle.frames.reserve(static_cast<std::size_t>(params.total_frames));
  for (int f = 0; f < params.total_frames; ++f) {
    Image frame = Image::filled(params.frame_w, params.frame_h, 0.12f, 0.12f, 0.14f);
    const int tick_x = static_cast<int>(
        static_cast<double>(f) / std::max(1, params.total_frames - 1) * (params.frame_w - 3));
    fill_rect(frame, tick_x, params.frame_h - 3, 3, 3, 0.6f, 0.6f, 0.6f);
    const bool in_event = f >= video.event_start && f < video.event_end;
    if (in_event) {
      fill_rect(frame, 2, 2, params.frame_w - 4, 4, 0.9f, 0.9f, 0.9f);
    }
    if (std::binary_search(video.relevant_frames.begin(), video.relevant_frames.end(), f)) {
      const int side = std::min(params.frame_w, params.frame_h) / 2;
      fill_rect(frame, (params.frame_w - side) / 2, (params.frame_h - side) / 2, side, side,
                color.r, color.g, color.b);
    }
    bundle.frames.push_back(std::move(frame));
  }
  return bundle;
}

std::vector<SpatialCrop> zoom_series(const SyntheticScene& scene,
                                     const std::vector<double>& ratios) {
  std::vector<SpatialCrop> crops;
  const int smaller = std::min(scene.canvas.width, scene.canvas.height);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double ratio = ratios[i];
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw std::invalid_argument("zoom_series: ratios must lie in (0, 1]");
    }
    int side = static_cast<int>(std::lround(ratio * smaller));
    side = std::max(1, std::min({side, scene.canvas.width, scene.canvas.height}));
    int x = static_cast<int>(std::lround(scene.target_center_x() - side / 2.0));
    int y = static_cast<int>(std::lround(scene.target_center_y() - side / 2.0));
    x = std::clamp(x, 0, scene.canvas.width - side);
    y = std::clamp(y, 0, scene.canvas.height - side);
    crops.push_back(SpatialCrop{static_cast<int>(i), x, y, side});
  }
  return crops;
}

std::string scene_question(const SyntheticScene& scene) {
  const auto space = scene.target_label.find(' ');
  const std::string shape =
      space == std::string::npos ? scene.target_label : scene.target_label.substr(space + 1);
  return "What is the color of the small " + shape + " marker?";
}

ManifestItem write_scene_item(const std::string& dir, const std::string& id,
                              const SceneBundle& bundle) {
  fs::create_directories(fs::path(dir) / "images");
  const std::string rel = "images/" + id + ".png";
  write_png(bundle.image, (fs::path(dir) / rel).string());

  ManifestItem item;
  item.id = id;
  item.task = TaskKind::kMcqImage;
  item.image_path = rel;
  item.question = scene_question(bundle.scene);
  item.options = bundle.scene.options;
  item.gold_letter = bundle.scene.gold_answer;
  return item;
}

ManifestItem write_video_item(const std::string& dir, const std::string& id,
                              const VideoBundle& bundle, bool grounding) {
  const fs::path frames_dir = fs::path(dir) / "videos" / id;
  fs::create_directories(frames_dir);
  FrameSequence seq;
  seq.fps = bundle.video.fps;
  for (std::size_t f = 0; f < bundle.frames.size(); ++f) {
    const std::string name = frame_name(static_cast<int>(f));
    write_png(bundle.frames[f], (frames_dir / name).string());
    seq.frame_refs.push_back("videos/" + id + "/" + name);
  }

  ManifestItem item;
  item.id = id;
  item.frames = std::move(seq);
  if (grounding) {
    item.task = TaskKind::kGrounding;
    item.question = "a bright bar appears at the top of the frame";
    item.gold_interval = {bundle.video.event_start / bundle.video.fps,
                          bundle.video.event_end / bundle.video.fps};
  } else {
    item.task = TaskKind::kMcqVideo;
    item.question = "What is the color of the square marker that appears in the video?";
    item.options = bundle.video.options;
    item.gold_letter = bundle.video.gold_answer;
  }
  return item;
}

Json world_to_json(const std::string& id, const SyntheticScene& scene) {
  Json obj;
  obj["id"] = id;
  obj["kind"] = "scene";
  obj["seed"] = scene.seed;
  obj["canvas"] = Json::array({scene.canvas.width, scene.canvas.height});
  obj["target_rect"] =
      Json::array({scene.target_x, scene.target_y, scene.target_w, scene.target_h});
  obj["gold"] = scene.gold_answer;
  return obj;
}

Json world_to_json(const std::string& id, const SyntheticVideo& video) {
  Json obj;
  obj["id"] = id;
  obj["kind"] = "video";
  obj["seed"] = video.seed;
  obj["total_frames"] = video.total_frames;
  obj["fps"] = video.fps;
  obj["event"] = Json::array({video.event_start, video.event_end});
  obj["relevant"] = video.relevant_frames;
  obj["gold"] = video.gold_answer;
  return obj;
}

}  // namespace ug
