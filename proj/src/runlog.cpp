#include "ug/runlog.hpp"

#include "ug/metrics.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ug {

namespace {

TaskKind task_from_name(const std::string& name) {
  if (name == "mcq-image") return TaskKind::kMcqImage;
  if (name == "mcq-video") return TaskKind::kMcqVideo;
  if (name == "grounding") return TaskKind::kGrounding;
  throw std::runtime_error("run record: unknown task '" + name + "'");
}

std::string format_metric(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

Json record_to_json(const RunRecord& record) {
  Json obj;
  obj["item_id"] = record.item_id;
  obj["config_hash"] = record.config_hash;
  obj["task"] = task_name(record.task);
  Json scores = Json::array();
  for (const auto& s : record.scores) {
    if (s) scores.push_back(*s);
    else scores.push_back(nullptr);
  }
  obj["scores"] = std::move(scores);
  obj["selection"] = record.selection;
  if (record.prediction_interval) {
    obj["prediction"] =
        Json::array({record.prediction_interval->first, record.prediction_interval->second});
  } else {
    obj["prediction"] = record.prediction_text;
  }
  obj["metric"] = record.metric;
  obj["elapsed_ms"] = record.elapsed_ms;
  obj["flags"] = record.flags;
  return obj;
}

RunRecord record_from_json(const Json& obj) {
  RunRecord rec;
  rec.item_id = obj.at("item_id").get<std::string>();
  rec.config_hash = obj.at("config_hash").get<std::string>();
  rec.task = task_from_name(obj.at("task").get<std::string>());
  for (const auto& s : obj.at("scores")) {
    if (s.is_null()) rec.scores.push_back(std::nullopt);
    else rec.scores.push_back(s.get<double>());
  }
  for (const auto& s : obj.at("selection")) rec.selection.push_back(s.get<int>());
  const auto& pred = obj.at("prediction");
  if (pred.is_array()) {
    rec.prediction_interval = {pred[0].get<double>(), pred[1].get<double>()};
  } else {
    rec.prediction_text = pred.get<std::string>();
  }
  rec.metric = obj.at("metric").get<double>();
  rec.elapsed_ms = obj.at("elapsed_ms").get<double>();
  for (const auto& f : obj.at("flags")) rec.flags.push_back(f.get<std::string>());
  return rec;
}

void write_run(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("run log: cannot open " + path + " for appending");
  for (const auto& rec : records) {
    out << record_to_json(rec).dump() << "\n";
  }
  if (!out) throw std::runtime_error("run log: short write to " + path);
}

std::vector<RunRecord> read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("run log: cannot open " + path);
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(record_from_json(Json::parse(line)));
  }
  return records;
}

RunSummary summarize(const std::vector<RunRecord>& records) {
  RunSummary summary;
  if (!records.empty()) summary.config_hash = records.front().config_hash;

  for (TaskKind task : {TaskKind::kMcqImage, TaskKind::kMcqVideo, TaskKind::kGrounding}) {
    SplitSummary split;
    split.split = task_name(task);
    std::vector<double> metrics;
    for (const auto& rec : records) {
      if (rec.task == task) metrics.push_back(rec.metric);
    }
    split.items = metrics.size();
    split.empty = metrics.empty();
    if (!split.empty) {
      if (task == TaskKind::kGrounding) {
        split.miou = mean_iou(metrics);
        split.r03 = recall_at(metrics, 0.3);
        split.r05 = recall_at(metrics, 0.5);
        split.r07 = recall_at(metrics, 0.7);
      } else {
        double sum = 0.0;
        for (double m : metrics) sum += m;
        split.accuracy = sum / static_cast<double>(metrics.size());
      }
    }
    summary.splits.push_back(split);
  }
  return summary;
}

std::string summary_table(const RunSummary& summary) {
  std::ostringstream os;
  os << "split        items  metrics\n";
  for (const auto& s : summary.splits) {
    os << std::left << std::setw(13) << s.split << std::setw(7) << s.items;
    if (s.empty) {
      os << "(no items)";
    } else if (s.split == "grounding") {
      os << "R@0.3=" << format_metric(s.r03) << "  R@0.5=" << format_metric(s.r05)
         << "  R@0.7=" << format_metric(s.r07) << "  mIoU=" << format_metric(s.miou);
    } else {
      os << "accuracy=" << format_metric(s.accuracy);
    }
    os << "\n";
  }
  os << "config_hash " << summary.config_hash << "\n";
  return os.str();
}

Json summary_to_json(const RunSummary& summary) {
  Json obj;
  obj["config_hash"] = summary.config_hash;
  Json splits = Json::array();
  for (const auto& s : summary.splits) {
    Json js;
    js["split"] = s.split;
    js["items"] = s.items;
    if (s.empty) {
      js["empty"] = true;
    } else if (s.split == "grounding") {
      js["mIoU"] = s.miou;
      js["R@0.3"] = s.r03;
      js["R@0.5"] = s.r05;
      js["R@0.7"] = s.r07;
    } else {
      js["accuracy"] = s.accuracy;
    }
    splits.push_back(std::move(js));
  }
  obj["splits"] = std::move(splits);
  return obj;
}

}  // namespace ug
