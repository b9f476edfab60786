// ug — uncertainty-guided visual selection.
//
// Subcommands mirror the three pipelines plus dataset tooling:
//   ug search    --manifest m.jsonl --out dir [--backend oracle|remote]
//   ug sample    --manifest m.jsonl --out dir
//   ug ground    --manifest m.jsonl --out dir
//   ug synth     --out dir --seed N [--force]
//   ug correlate --out dir --seed N
//
// Flags override config-file values; see README.md for the config schema.

#include "ug/cli.hpp"
#include "ug/log.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  std::string manifest;
  std::string out_dir;
  std::string backend;
  std::optional<std::uint64_t> seed;
  std::optional<int> items_in_flight;
  std::string scorer_model;
  std::string answerer_model;
  std::string log_level;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--manifest", flags.manifest, "manifest JSONL path");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--backend", flags.backend, "oracle | remote")
      ->check(CLI::IsMember({"oracle", "remote"}));
  cmd->add_option("--seed", flags.seed, "base seed for synthetic generation");
  cmd->add_option("--items-in-flight", flags.items_in_flight, "concurrent items");
  cmd->add_option("--scorer-model", flags.scorer_model, "override scorer model id");
  cmd->add_option("--answerer-model", flags.answerer_model, "override answerer model id");
  cmd->add_option("--log-level", flags.log_level, "error | warn | info | debug");
}

ug::RunConfig resolve(const CommonFlags& flags) {
  ug::RunConfig cfg = ug::load_config(flags.config_path);
  if (!flags.manifest.empty()) cfg.manifest_path = flags.manifest;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.backend == "oracle") cfg.backend = ug::BackendKind::kOracle;
  if (flags.backend == "remote") cfg.backend = ug::BackendKind::kRemote;
  if (flags.seed) {
    cfg.seed = *flags.seed;
    cfg.seed_set = true;
  }
  if (flags.items_in_flight) cfg.items_in_flight = *flags.items_in_flight;
  if (!flags.scorer_model.empty()) cfg.scorer.model_id = flags.scorer_model;
  if (!flags.answerer_model.empty()) cfg.answerer.model_id = flags.answerer_model;
  if (!flags.log_level.empty()) cfg.log_level = flags.log_level;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uncertainty-guided visual selection"};
  app.require_subcommand(1);

  CommonFlags search_flags, sample_flags, ground_flags, synth_flags, correlate_flags;
  bool force = false;

  auto* search = app.add_subcommand("search", "visual search over image crops");
  add_common(search, search_flags);
  auto* sample = app.add_subcommand("sample", "keyframe selection for video QA");
  add_common(sample, sample_flags);
  auto* ground = app.add_subcommand("ground", "temporal grounding of events");
  add_common(ground, ground_flags);
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_common(synth, synth_flags);
  synth->add_flag("--force", force, "overwrite a non-empty output directory");
  auto* correlate = app.add_subcommand("correlate", "entropy-vs-zoom correlation sweep");
  add_common(correlate, correlate_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (search->parsed()) return ug::cmd_run(resolve(search_flags), ug::TaskKind::kMcqImage);
    if (sample->parsed()) return ug::cmd_run(resolve(sample_flags), ug::TaskKind::kMcqVideo);
    if (ground->parsed()) return ug::cmd_run(resolve(ground_flags), ug::TaskKind::kGrounding);
    if (synth->parsed()) return ug::cmd_synth(resolve(synth_flags), force);
    if (correlate->parsed()) return ug::cmd_correlate(resolve(correlate_flags));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ug::kExitConfigError;
  }
  return ug::kExitConfigError;
}
