#pragma once

/**
 * @file manifest.hpp
 * @brief Benchmark manifest ingestion (JSONL, one item per line).
 *
 * Schema per line:
 *   id       string
 *   task     "mcq-image" | "mcq-video" | "grounding"
 *   media    {"image": path} | {"frames_dir": dir, "fps": f}
 *            | {"frame_list": [paths], "fps": f}
 *   question string (the event description for grounding items)
 *   options  [strings]        (mcq tasks only)
 *   gold     "A".."Z" for mcq; [start_s, end_s] for grounding
 *
 * Paths are resolved relative to the manifest's directory. Frame
 * directories are listed lexicographically.
 */

#include "ug/candidates.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ug {

enum class TaskKind { kMcqImage, kMcqVideo, kGrounding };

std::string task_name(TaskKind task);

struct ManifestItem {
  std::string id;
  TaskKind task = TaskKind::kMcqImage;

  // media: exactly one of image_path / frames
  std::string image_path;
  std::optional<FrameSequence> frames;

  std::string question;               // event description for grounding
  std::vector<std::string> options;   // mcq only
  std::string gold_letter;            // mcq only
  std::pair<double, double> gold_interval{0.0, 0.0};  // grounding only
};

/// Parses and validates a JSONL manifest. Every validation error names the
/// offending line and field. An empty file yields an empty list.
std::vector<ManifestItem> load_manifest(const std::string& path);

/// Serializes one item back to its JSONL form (used by the synthetic
/// dataset writer). Paths are emitted as given; pass frames_dir_rel to emit
/// video media as {"frames_dir", "fps"} instead of an explicit frame list.
std::string manifest_line(const ManifestItem& item, const std::string& frames_dir_rel = {});

}  // namespace ug
