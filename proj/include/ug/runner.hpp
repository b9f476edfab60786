#pragma once

/**
 * @file runner.hpp
 * @brief Drives pipelines over manifest items and produces run records.
 *
 * The runner is shared by the CLI and the verification suites: it binds
 * each item to its backends (a fixed remote pair, or a per-item oracle
 * bound to the item's recorded world), runs the task-appropriate pipeline,
 * computes the per-item metric, and assembles records in item order.
 */

#include "ug/backend.hpp"
#include "ug/manifest.hpp"
#include "ug/oracle.hpp"
#include "ug/pipelines.hpp"
#include "ug/runlog.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ug {

/// Per-item backend binding.
class BackendProvider {
public:
  virtual ~BackendProvider() = default;
  virtual BackendPair backends_for(const ManifestItem& item) = 0;
  /// Upper bound on concurrent candidate-scoring requests per item.
  virtual int max_concurrency() const { return 1; }
};

/// One fixed backend pair for every item (the remote case).
class FixedBackendProvider final : public BackendProvider {
public:
  FixedBackendProvider(BackendPair pair, int concurrency)
      : pair_(std::move(pair)), concurrency_(concurrency) {}
  BackendPair backends_for(const ManifestItem&) override { return pair_; }
  int max_concurrency() const override { return concurrency_; }

private:
  BackendPair pair_;
  int concurrency_;
};

/// Binds each item to an oracle replaying that item's recorded world.
class OracleBackendProvider final : public BackendProvider {
public:
  OracleBackendProvider(std::map<std::string, OracleWorld> worlds, OracleParams params)
      : worlds_(std::move(worlds)), params_(std::move(params)) {}
  BackendPair backends_for(const ManifestItem& item) override;

private:
  std::map<std::string, OracleWorld> worlds_;
  OracleParams params_;
};

struct PipelineSettings {
  SearchConfig search;
  SampleConfig sample;
  GroundConfig ground;
};

/// Runs one item through its pipeline. Exceptions are captured into the
/// record (flag "error:<what>", metric 0) so a bad item cannot abort a run.
RunRecord run_item(const ManifestItem& item, BackendProvider& provider,
                   const PipelineSettings& settings, const std::string& config_hash);

/// Runs all items, optionally with several items in flight; records come
/// back in item order regardless of completion order.
std::vector<RunRecord> run_items(const std::vector<ManifestItem>& items,
                                 BackendProvider& provider, const PipelineSettings& settings,
                                 const std::string& config_hash, int items_in_flight = 1);

}  // namespace ug
