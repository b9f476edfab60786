#pragma once

/**
 * @file oracle.hpp
 * @brief Deterministic synthetic backend whose uncertainty follows a
 *        prescribed monotone law.
 *
 * The oracle replays a known world (a planted scene or a synthetic video)
 * and answers scoring requests from the request's geometry metadata alone —
 * it never reads pixels. Its entropy decreases linearly as the visible
 * fraction of the target grows, and its yes/no confidence steps positive
 * exactly when the shown frame window intersects the event, so every
 * pipeline can be verified end to end without a model or network.
 */

#include "ug/backend.hpp"
#include "ug/json.hpp"
#include "ug/synth.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ug {

struct OracleParams {
  double entropy_ceiling = 1.3862943611198906;  // ln 4, a flat four-way guess
  double entropy_floor = 0.05;
  double noise_sigma = 0.05;      // nats, added to the entropy target
  double brc_noise_sigma = 0.2;   // added to the yes/no confidence
  double zoom_gain = 2.0;         // tighter crops keep raising visibility
  std::vector<std::string> vocab{"A", "B", "C", "D"};
  std::string eos_token = "<eos>";
};

using OracleWorld = std::variant<SyntheticScene, SyntheticVideo>;

/// Visible fraction of the scene's target for a given crop: the overlap
/// share of the target, boosted by zoom_gain as the crop tightens, capped
/// at 1.
double crop_visibility(const SyntheticScene& scene, const SpatialCrop& crop,
                       double zoom_gain);

/// Builds a distribution over `support` whose Shannon entropy matches
/// `target` within 1e-6 nats by mixing a one-hot on mode_index with the
/// uniform distribution (bisection on the mixing weight). `target` must lie
/// in [0, ln(support size)].
TokenDistribution distribution_with_entropy(const std::vector<std::string>& support,
                                            std::size_t mode_index, double target);

class OracleBackend final : public Backend {
public:
  OracleBackend(OracleWorld world, OracleParams params = {});

  ScoreOutcome score(const ScoringRequest& request) override;

  std::string describe() const override;

  const OracleParams& params() const { return params_; }

private:
  ScoreOutcome score_scene(const SyntheticScene& scene, const ScoringRequest& request) const;
  ScoreOutcome score_video(const SyntheticVideo& video, const ScoringRequest& request) const;
  ScoreOutcome mcq_outcome(double visibility, const std::string& gold,
                           std::uint64_t noise_key, std::uint64_t world_seed,
                           TraceMode mode) const;

  OracleWorld world_;
  OracleParams params_;
};

/// Parses a worlds.jsonl sidecar (written next to synthetic manifests) into
/// an id -> world map.
std::map<std::string, OracleWorld> load_worlds(const std::string& path);

}  // namespace ug
