#include "ug/runner.hpp"

#include "ug/image.hpp"
#include "ug/log.hpp"
#include "ug/metrics.hpp"

#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace ug {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void copy_scores(const std::vector<ScoredCandidate>& candidates, RunRecord& rec) {
  rec.scores.reserve(candidates.size());
  for (const auto& c : candidates) rec.scores.push_back(c.score);
}

}  // namespace

BackendPair OracleBackendProvider::backends_for(const ManifestItem& item) {
  auto it = worlds_.find(item.id);
  if (it == worlds_.end()) {
    throw std::runtime_error("oracle provider: no recorded world for item '" + item.id + "'");
  }
  auto backend = std::make_shared<OracleBackend>(it->second, params_);
  return BackendPair{backend, backend};
}

RunRecord run_item(const ManifestItem& item, BackendProvider& provider,
                   const PipelineSettings& settings, const std::string& config_hash) {
  RunRecord rec;
  rec.item_id = item.id;
  rec.config_hash = config_hash;
  rec.task = item.task;
  const auto start = Clock::now();

  try {
    BackendPair backends = provider.backends_for(item);
    const int concurrency = provider.max_concurrency();
    switch (item.task) {
      case TaskKind::kMcqImage: {
        auto image = std::make_shared<const Image>(load_image(item.image_path));
        auto res = ug_search(image, item.question, item.options, backends, settings.search,
                             concurrency);
        copy_scores(res.candidates, rec);
        rec.selection = res.winning;
        rec.prediction_text = res.answer;
        rec.flags = std::move(res.flags);
        const auto pred = normalize_mcq_answer(res.answer, static_cast<int>(item.options.size()));
        rec.metric = (!pred.empty() && pred == item.gold_letter) ? 1.0 : 0.0;
        break;
      }
      case TaskKind::kMcqVideo: {
        if (!item.frames) throw std::runtime_error("item has no frame sequence");
        auto res = ug_sample(*item.frames, item.question, item.options, backends,
                             settings.sample, concurrency);
        copy_scores(res.candidates, rec);
        rec.selection = res.selected_frames;
        rec.prediction_text = res.answer;
        rec.flags = std::move(res.flags);
        const auto pred = normalize_mcq_answer(res.answer, static_cast<int>(item.options.size()));
        rec.metric = (!pred.empty() && pred == item.gold_letter) ? 1.0 : 0.0;
        break;
      }
      case TaskKind::kGrounding: {
        if (!item.frames) throw std::runtime_error("item has no frame sequence");
        auto res = ug_ground(*item.frames, item.question, *backends.scorer, settings.ground,
                             concurrency);
        rec.scores.reserve(static_cast<std::size_t>(res.scores.size()));
        for (Eigen::Index i = 0; i < res.scores.size(); ++i) rec.scores.push_back(res.scores[i]);
        rec.selection = {res.interval.window_start, res.interval.window_end};
        rec.prediction_interval = {res.interval.start_s, res.interval.end_s};
        rec.flags = std::move(res.flags);
        rec.metric = interval_iou(*rec.prediction_interval, item.gold_interval);
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.flags.push_back(std::string("error:") + e.what());
    rec.metric = 0.0;
    log_error("item '" + item.id + "' failed: " + e.what());
  }

  rec.elapsed_ms = ms_since(start);
  return rec;
}

std::vector<RunRecord> run_items(const std::vector<ManifestItem>& items,
                                 BackendProvider& provider, const PipelineSettings& settings,
                                 const std::string& config_hash, int items_in_flight) {
  std::vector<RunRecord> records(items.size());
  if (items.empty()) return records;

  if (items_in_flight <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      records[i] = run_item(items[i], provider, settings, config_hash);
    }
    return records;
  }

  std::atomic<std::size_t> next{0};
  const std::size_t n_workers =
      std::min(static_cast<std::size_t>(items_in_flight), items.size());
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
        records[i] = run_item(items[i], provider, settings, config_hash);
      }
    });
  }
  for (auto& t : workers) t.join();
  return records;
}

}  // namespace ug
