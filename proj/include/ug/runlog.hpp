#pragma once

/**
 * @file runlog.hpp
 * @brief Per-item run records, JSONL persistence, and summary reports.
 *
 * Record schema (stable field order):
 *   item_id      string
 *   config_hash  string
 *   scores       [number | null]   per-candidate score, null = unscored
 *   selection    [ints]            winning candidate / frame ordinals
 *   prediction   string or [start_s, end_s]
 *   metric       number            1/0 correctness for mcq, IoU for grounding
 *   elapsed_ms   number
 *   flags        [strings]
 */

#include "ug/json.hpp"
#include "ug/manifest.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ug {

struct RunRecord {
  std::string item_id;
  std::string config_hash;
  TaskKind task = TaskKind::kMcqImage;
  std::vector<std::optional<double>> scores;
  std::vector<int> selection;
  std::string prediction_text;                         // mcq
  std::optional<std::pair<double, double>> prediction_interval;  // grounding
  double metric = 0.0;
  double elapsed_ms = 0.0;
  std::vector<std::string> flags;
};

Json record_to_json(const RunRecord& record);
RunRecord record_from_json(const Json& obj);

/// Appends records to a JSONL file, one line each, in the given order.
void write_run(const std::vector<RunRecord>& records, const std::string& path);

std::vector<RunRecord> read_run(const std::string& path);

/// Per-task-split metric summary.
struct SplitSummary {
  std::string split;
  std::size_t items = 0;
  bool empty = true;  // explicit no-items marker; metric fields are absent, not zero
  double accuracy = 0.0;                 // mcq splits
  double miou = 0.0, r03 = 0.0, r05 = 0.0, r07 = 0.0;  // grounding splits
};

struct RunSummary {
  std::string config_hash;
  std::vector<SplitSummary> splits;
};

/// Aggregates records into per-split metrics. Splits with no items are
/// reported with the explicit empty marker.
RunSummary summarize(const std::vector<RunRecord>& records);

/// Human-readable table of a summary.
std::string summary_table(const RunSummary& summary);

Json summary_to_json(const RunSummary& summary);

}  // namespace ug
