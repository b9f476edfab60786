#include "ug/cli.hpp"

#include "ug/log.hpp"
#include "ug/metrics.hpp"
#include "ug/oracle.hpp"
#include "ug/remote_backend.hpp"
#include "ug/rng.hpp"
#include "ug/runner.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;

namespace ug {

namespace {

std::vector<ManifestItem> filter_task(const std::vector<ManifestItem>& items, TaskKind task) {
  std::vector<ManifestItem> out;
  for (const auto& item : items) {
    if (item.task == task) out.push_back(item);
  }
  return out;
}

std::unique_ptr<BackendProvider> make_provider(const RunConfig& cfg) {
  if (cfg.backend == BackendKind::kRemote) {
    if (cfg.scorer.endpoint_url.empty()) {
      throw std::runtime_error("remote backend selected but scorer.endpoint_url is empty");
    }
    BackendPair pair;
    pair.scorer = std::make_shared<RemoteBackend>(cfg.scorer);
    pair.answerer = cfg.answerer.endpoint_url.empty()
                        ? pair.scorer
                        : std::make_shared<RemoteBackend>(cfg.answerer);
    return std::make_unique<FixedBackendProvider>(std::move(pair), cfg.scorer.max_concurrency);
  }
  const fs::path worlds_path = fs::path(cfg.manifest_path).parent_path() / "worlds.jsonl";
  if (!fs::exists(worlds_path)) {
    throw std::runtime_error("oracle backend needs " + worlds_path.string() +
                             " next to the manifest (generate datasets with `ug synth`)");
  }
  return std::make_unique<OracleBackendProvider>(load_worlds(worlds_path.string()), cfg.oracle);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void persist_run(const RunConfig& cfg, const std::string& run_name,
                 const std::vector<RunRecord>& records) {
  fs::create_directories(cfg.out_dir);
  const fs::path run_path = fs::path(cfg.out_dir) / (run_name + ".jsonl");
  fs::remove(run_path);  // fresh file per invocation; records append during a run
  write_run(records, run_path.string());

  // Summaries are named after the run so pipelines can share an output
  // directory without clobbering each other.
  const RunSummary summary = summarize(records);
  write_text(fs::path(cfg.out_dir) / (run_name + ".summary.txt"), summary_table(summary));
  write_text(fs::path(cfg.out_dir) / (run_name + ".summary.json"),
             summary_to_json(summary).dump(2) + "\n");
  write_text(fs::path(cfg.out_dir) / "config.json", config_to_json(cfg).dump(2) + "\n");
  std::cout << summary_table(summary);
}

std::size_t failed_items(const std::vector<RunRecord>& records) {
  std::size_t failed = 0;
  for (const auto& rec : records) {
    for (const auto& f : rec.flags) {
      if (f.rfind("error:", 0) == 0 || f == "answer_failed") {
        ++failed;
        break;
      }
    }
  }
  return failed;
}

}  // namespace

int cmd_run(const RunConfig& cfg, TaskKind task) {
  set_log_level(parse_log_level(cfg.log_level));
  if (cfg.manifest_path.empty() || !fs::exists(cfg.manifest_path)) {
    std::cerr << "error: manifest not found: '" << cfg.manifest_path << "'\n";
    return kExitConfigError;
  }
  if (cfg.out_dir.empty()) {
    std::cerr << "error: no output directory (--out)\n";
    return kExitConfigError;
  }

  std::vector<ManifestItem> items;
  try {
    items = filter_task(load_manifest(cfg.manifest_path), task);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::unique_ptr<BackendProvider> provider;
  try {
    provider = make_provider(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const std::string hash = config_fingerprint(cfg);
  const auto records = run_items(items, *provider, {cfg.search, cfg.sample, cfg.ground}, hash,
                                 cfg.items_in_flight);
  persist_run(cfg, "run_" + task_name(task), records);

  const std::size_t failed = failed_items(records);
  if (failed > 0 &&
      static_cast<double>(failed) / static_cast<double>(records.size()) > cfg.failure_budget) {
    std::cerr << "error: " << failed << "/" << records.size()
              << " items failed, exceeding the failure budget of " << cfg.failure_budget << "\n";
    return kExitBudgetExceeded;
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, bool force) {
  set_log_level(parse_log_level(cfg.log_level));
  if (!cfg.seed_set) {
    std::cerr << "error: synthetic generation requires an explicit --seed\n";
    return kExitConfigError;
  }
  if (cfg.out_dir.empty()) {
    std::cerr << "error: no output directory (--out)\n";
    return kExitConfigError;
  }
  const fs::path dir(cfg.out_dir);
  if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
    std::cerr << "error: output directory " << dir
              << " is not empty; pass --force to overwrite\n";
    return kExitConfigError;
  }
  fs::create_directories(dir);

  std::ostringstream manifest, worlds;
  char id_buf[32];

  for (int i = 0; i < cfg.synth.scenes; ++i) {
    std::snprintf(id_buf, sizeof(id_buf), "scene_%04d", i);
    const auto bundle = plant_scene(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)),
                                    cfg.synth.scene);
    manifest << manifest_line(write_scene_item(dir.string(), id_buf, bundle)) << "\n";
    worlds << world_to_json(id_buf, bundle.scene).dump() << "\n";
  }
  for (int i = 0; i < cfg.synth.sample_videos; ++i) {
    std::snprintf(id_buf, sizeof(id_buf), "vidq_%04d", i);
    const auto bundle = synth_video(mix_seed(cfg.seed, 0x100000ULL + static_cast<std::uint64_t>(i)),
                                    cfg.synth.sample_video);
    const auto item = write_video_item(dir.string(), id_buf, bundle, /*grounding=*/false);
    manifest << manifest_line(item, "videos/" + std::string(id_buf)) << "\n";
    worlds << world_to_json(id_buf, bundle.video).dump() << "\n";
  }
  for (int i = 0; i < cfg.synth.ground_videos; ++i) {
    std::snprintf(id_buf, sizeof(id_buf), "vidg_%04d", i);
    const auto bundle = synth_video(mix_seed(cfg.seed, 0x200000ULL + static_cast<std::uint64_t>(i)),
                                    cfg.synth.ground_video);
    const auto item = write_video_item(dir.string(), id_buf, bundle, /*grounding=*/true);
    manifest << manifest_line(item, "videos/" + std::string(id_buf)) << "\n";
    worlds << world_to_json(id_buf, bundle.video).dump() << "\n";
  }

  write_text(dir / "manifest.jsonl", manifest.str());
  write_text(dir / "worlds.jsonl", worlds.str());
  write_text(dir / "config.json", config_to_json(cfg).dump(2) + "\n");

  const int total = cfg.synth.scenes + cfg.synth.sample_videos + cfg.synth.ground_videos;
  std::cout << "wrote " << total << " items (" << cfg.synth.scenes << " scenes, "
            << cfg.synth.sample_videos << " sampling videos, " << cfg.synth.ground_videos
            << " grounding videos) to " << dir << "\n";
  return kExitOk;
}

int cmd_correlate(const RunConfig& cfg) {
  set_log_level(parse_log_level(cfg.log_level));
  if (!cfg.seed_set) {
    std::cerr << "error: correlate requires an explicit --seed\n";
    return kExitConfigError;
  }
  if (cfg.correlate.ratios.size() < 2) {
    std::cerr << "error: correlate needs at least two zoom ratios\n";
    return kExitConfigError;
  }
  if (cfg.out_dir.empty()) {
    std::cerr << "error: no output directory (--out)\n";
    return kExitConfigError;
  }
  fs::create_directories(cfg.out_dir);

  const auto& ratios = cfg.correlate.ratios;
  const int n_seeds = cfg.correlate.seeds;
  const std::size_t n_ratios = ratios.size();

  std::vector<double> entropies;   // one per (seed, ratio), ratio-major inner
  std::vector<double> corrects;
  std::vector<double> zoom_levels;  // zoom-in factor 1/ratio per point
  std::vector<double> ratio_entropy_sum(n_ratios, 0.0);
  std::vector<double> ratio_correct_sum(n_ratios, 0.0);

  for (int s = 0; s < n_seeds; ++s) {
    const auto bundle = plant_scene(mix_seed(cfg.seed, static_cast<std::uint64_t>(s)),
                                    cfg.synth.scene);
    OracleBackend oracle(bundle.scene, cfg.oracle);
    const auto crops = zoom_series(bundle.scene, ratios);
    const std::string prompt = mcq_prompt(scene_question(bundle.scene), bundle.scene.options);
    for (std::size_t r = 0; r < crops.size(); ++r) {
      ScoringRequest req;
      Visual v;
      v.crop = crops[r];
      req.visuals.push_back(std::move(v));
      req.prompt = prompt;
      const auto outcome = oracle.score(req);
      const double h = mean_token_entropy(outcome.trace);
      const double correct =
          normalize_mcq_answer(outcome.text, 4) == bundle.scene.gold_answer ? 1.0 : 0.0;
      entropies.push_back(h);
      corrects.push_back(correct);
      zoom_levels.push_back(1.0 / ratios[r]);
      ratio_entropy_sum[r] += h;
      ratio_correct_sum[r] += correct;
    }
  }

  std::ostringstream csv;
  csv << "ratio,mean_entropy,accuracy\n";
  Eigen::VectorXd per_ratio_entropy(static_cast<Eigen::Index>(n_ratios));
  Eigen::VectorXd per_ratio_accuracy(static_cast<Eigen::Index>(n_ratios));
  for (std::size_t r = 0; r < n_ratios; ++r) {
    per_ratio_entropy[static_cast<Eigen::Index>(r)] = ratio_entropy_sum[r] / n_seeds;
    per_ratio_accuracy[static_cast<Eigen::Index>(r)] = ratio_correct_sum[r] / n_seeds;
    csv << ratios[r] << "," << per_ratio_entropy[static_cast<Eigen::Index>(r)] << ","
        << per_ratio_accuracy[static_cast<Eigen::Index>(r)] << "\n";
  }

  double zoom_r = 0.0;
  try {
    zoom_r = pearson(Eigen::Map<const Eigen::VectorXd>(entropies.data(),
                                                       static_cast<Eigen::Index>(entropies.size())),
                     Eigen::Map<const Eigen::VectorXd>(zoom_levels.data(),
                                                       static_cast<Eigen::Index>(zoom_levels.size())));
  } catch (const std::domain_error& e) {
    std::cerr << "error: entropy-zoom correlation undefined: " << e.what() << "\n";
    return kExitValidation;
  }
  // A flat accuracy column (all right or all wrong) leaves this coefficient
  // undefined; the sweep itself is still valid data.
  bool acc_defined = true;
  double acc_r = 0.0;
  try {
    acc_r = pearson(per_ratio_entropy, per_ratio_accuracy);
  } catch (const std::domain_error&) {
    acc_defined = false;
    log_warn("accuracy column has zero variance; entropy-accuracy correlation undefined");
  }

  write_text(fs::path(cfg.out_dir) / "correlate.csv", csv.str());
  Json report;
  report["pearson_entropy_vs_zoom"] = zoom_r;
  if (acc_defined) report["pearson_entropy_vs_accuracy"] = acc_r;
  else report["pearson_entropy_vs_accuracy"] = nullptr;
  report["seeds"] = n_seeds;
  report["ratios"] = ratios;
  report["config_hash"] = config_fingerprint(cfg);
  write_text(fs::path(cfg.out_dir) / "correlate.json", report.dump(2) + "\n");

  std::cout << "pearson(entropy, zoom-in level) = " << zoom_r << "\n"
            << "pearson(mean entropy, accuracy) = "
            << (acc_defined ? std::to_string(acc_r) : std::string("n/a")) << "\n";
  return kExitOk;
}

}  // namespace ug
