#include "ug/manifest.hpp"

#include "ug/json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace ug {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("manifest line " + std::to_string(line_no) + ": " + what);
}

std::string need_string(const Json& obj, const char* field, std::size_t line_no) {
  if (!obj.contains(field) || !obj[field].is_string()) {
    fail(line_no, std::string("missing or non-string field '") + field + "'");
  }
  return obj[field].get<std::string>();
}

std::string resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).string();
}

std::vector<std::string> list_frames_dir(const std::string& dir, std::size_t line_no) {
  if (!fs::is_directory(dir)) fail(line_no, "frames_dir '" + dir + "' is not a directory");
  std::vector<std::string> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".PNG" || ext == ".JPG") {
      frames.push_back(entry.path().string());
    }
  }
  std::sort(frames.begin(), frames.end());
  if (frames.empty()) fail(line_no, "frames_dir '" + dir + "' holds no image files");
  return frames;
}

ManifestItem parse_item(const Json& obj, const fs::path& base, std::size_t line_no) {
  ManifestItem item;
  item.id = need_string(obj, "id", line_no);

  const std::string task = need_string(obj, "task", line_no);
  if (task == "mcq-image") item.task = TaskKind::kMcqImage;
  else if (task == "mcq-video") item.task = TaskKind::kMcqVideo;
  else if (task == "grounding") item.task = TaskKind::kGrounding;
  else fail(line_no, "unknown task '" + task + "'");

  if (!obj.contains("media") || !obj["media"].is_object()) {
    fail(line_no, "missing or non-object field 'media'");
  }
  const Json& media = obj["media"];
  if (media.contains("image")) {
    item.image_path = resolve(base, media["image"].get<std::string>());
  } else {
    FrameSequence seq;
    if (!media.contains("fps") || !media["fps"].is_number()) {
      fail(line_no, "video media requires a numeric 'fps' field");
    }
    seq.fps = media["fps"].get<double>();
    if (!(seq.fps > 0.0)) fail(line_no, "field 'fps' must be positive");
    if (media.contains("frame_list")) {
      for (const auto& f : media["frame_list"]) {
        seq.frame_refs.push_back(resolve(base, f.get<std::string>()));
      }
      if (seq.frame_refs.empty()) fail(line_no, "field 'frame_list' is empty");
    } else if (media.contains("frames_dir")) {
      seq.frame_refs = list_frames_dir(resolve(base, media["frames_dir"].get<std::string>()), line_no);
    } else {
      fail(line_no, "media must carry 'image', 'frames_dir' or 'frame_list'");
    }
    item.frames = std::move(seq);
  }

  item.question = need_string(obj, "question", line_no);
  if (item.question.empty()) fail(line_no, "field 'question' is empty");

  if (item.task == TaskKind::kGrounding) {
    if (item.image_path.size()) fail(line_no, "grounding items require video media");
    if (!obj.contains("gold") || !obj["gold"].is_array() || obj["gold"].size() != 2) {
      fail(line_no, "field 'gold' must be a [start_s, end_s] pair for grounding items");
    }
    item.gold_interval = {obj["gold"][0].get<double>(), obj["gold"][1].get<double>()};
    if (!(item.gold_interval.second > item.gold_interval.first)) {
      fail(line_no, "field 'gold' interval must satisfy end > start");
    }
  } else {
    if (item.task == TaskKind::kMcqImage && item.image_path.empty()) {
      fail(line_no, "mcq-image items require image media");
    }
    if (item.task == TaskKind::kMcqVideo && !item.frames) {
      fail(line_no, "mcq-video items require video media");
    }
    if (!obj.contains("options") || !obj["options"].is_array() || obj["options"].empty()) {
      fail(line_no, "field 'options' must be a non-empty array for mcq items");
    }
    for (const auto& o : obj["options"]) item.options.push_back(o.get<std::string>());
    item.gold_letter = need_string(obj, "gold", line_no);
    if (item.gold_letter.size() != 1 || item.gold_letter[0] < 'A' ||
        item.gold_letter[0] >= static_cast<char>('A' + item.options.size())) {
      fail(line_no, "field 'gold' must be an option letter within A.." +
                        std::string(1, static_cast<char>('A' + item.options.size() - 1)));
    }
  }
  return item;
}

}  // namespace

std::string task_name(TaskKind task) {
  switch (task) {
    case TaskKind::kMcqImage: return "mcq-image";
    case TaskKind::kMcqVideo: return "mcq-video";
    case TaskKind::kGrounding: return "grounding";
  }
  return "unknown";
}

std::vector<ManifestItem> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot open " + path);
  const fs::path base = fs::path(path).parent_path();

  std::vector<ManifestItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json obj = Json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) fail(line_no, "not a JSON object");
    try {
      items.push_back(parse_item(obj, base, line_no));
    } catch (const Json::exception& e) {
      fail(line_no, e.what());  // wrong JSON types inside otherwise-present fields
    }
  }
  return items;
}

std::string manifest_line(const ManifestItem& item, const std::string& frames_dir_rel) {
  Json obj;
  obj["id"] = item.id;
  obj["task"] = task_name(item.task);
  if (!item.image_path.empty()) {
    obj["media"] = Json{{"image", item.image_path}};
  } else if (!frames_dir_rel.empty()) {
    obj["media"] = Json{{"frames_dir", frames_dir_rel}, {"fps", item.frames ? item.frames->fps : 1.0}};
  } else if (item.frames) {
    obj["media"] = Json{{"frame_list", item.frames->frame_refs}, {"fps", item.frames->fps}};
  }
  obj["question"] = item.question;
  if (item.task == TaskKind::kGrounding) {
    obj["gold"] = Json::array({item.gold_interval.first, item.gold_interval.second});
  } else {
    obj["options"] = item.options;
    obj["gold"] = item.gold_letter;
  }
  return obj.dump();
}

}  // namespace ug
