#include "ug/pipelines.hpp"

#include "ug/oracle.hpp"
#include "ug/rng.hpp"
#include "ug/synth.hpp"
#include "ug/uncertainty.hpp"

#include <doctest.h>

#include <stdexcept>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <thread>
#include <unistd.h>

using namespace ug;
namespace fs = std::filesystem;

namespace {

// A backend that fails every request; exercises the degraded paths.
class BrokenBackend final : public Backend {
public:
  ScoreOutcome score(const ScoringRequest&) override {
    throw TransportError("broken by construction");
  }
  std::string describe() const override { return "broken"; }
};

// Fails scoring requests but answers final calls; isolates degraded answers.
class AnswerOnlyBackend final : public Backend {
public:
  ScoreOutcome score(const ScoringRequest& request) override {
    if (request.visuals.size() != 1) throw TransportError("scoring disabled");
    ScoreOutcome out;
    TokenDistribution d;
    d.entries = {TokenEntry{"A", 1.0}};
    out.trace.steps.push_back(std::move(d));
    out.trace.chosen_tokens.push_back("A");
    out.text = "A";
    return out;
  }
  std::string describe() const override { return "answer-only"; }
};

BackendPair oracle_pair(const OracleWorld& world, const OracleParams& params) {
  auto backend = std::make_shared<OracleBackend>(world, params);
  return BackendPair{backend, backend};
}

OracleParams noiseless() {
  OracleParams p;
  p.noise_sigma = 0.0;
  p.brc_noise_sigma = 0.0;
  return p;
}

// Writes a synthetic video to disk and returns its frame sequence with
// absolute paths.
FrameSequence materialize(const VideoBundle& bundle, const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("ug_pipe_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto item = write_video_item(dir.string(), tag, bundle, false);
  FrameSequence seq = *item.frames;
  for (auto& ref : seq.frame_refs) ref = (fs::path(dir.string()) / ref).string();
  return seq;
}

}  // namespace

TEST_SUITE_BEGIN("pipelines");

TEST_CASE("mcq prompt carries options and the letter directive") {
  const std::string p = mcq_prompt("What color?", {"red", "blue"});
  CHECK(p.find("What color?") == 0);
  CHECK(p.find("A. red") != std::string::npos);
  CHECK(p.find("B. blue") != std::string::npos);
  CHECK(p.find("option's letter") != std::string::npos);
}

TEST_CASE("grounding prompt substitutes the event text") {
  GroundConfig cfg;
  const std::string p = grounding_prompt(cfg.prompt_template, "pouring coffee");
  CHECK(p.find("Given the action: pouring coffee, is this action depicted") == 0);
  CHECK(p.find("A. yes") != std::string::npos);
  CHECK(p.find("B. no") != std::string::npos);
  CHECK_THROWS_AS(grounding_prompt("no placeholder here", "x"), std::invalid_argument);
}

TEST_CASE("ug_search finds the planted target with the oracle") {
  const auto bundle = plant_scene(123, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);
  const auto pair = oracle_pair(bundle.scene, noiseless());

  SearchConfig cfg;
  const auto result = ug_search(image, scene_question(bundle.scene), bundle.scene.options,
                                pair, cfg);
  REQUIRE(result.winning.size() == 1u);
  const auto& crop = std::get<SpatialCrop>(
      result.candidates[static_cast<std::size_t>(result.winning[0])].candidate);
  CHECK(crop.contains(bundle.scene.target_center_x(), bundle.scene.target_center_y()));
  CHECK(result.answer == bundle.scene.gold_answer);
  CHECK(result.flags.empty());
  // every candidate scored, scores within the oracle law's range
  for (const auto& c : result.candidates) {
    REQUIRE(c.scored());
    CHECK(*c.score >= 0.05 - 1e-9);
    CHECK(*c.score <= std::log(4.0) + 1e-9);
  }
}

TEST_CASE("ug_search degenerate single-crop grid answers on the full canvas crop") {
  const auto bundle = plant_scene(5, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);
  const auto pair = oracle_pair(bundle.scene, noiseless());

  SearchConfig cfg;
  cfg.crop_fraction = 1.0;
  const auto result = ug_search(image, scene_question(bundle.scene), bundle.scene.options,
                                pair, cfg);
  CHECK(result.candidates.size() == 1u);
  CHECK(result.winning == std::vector<int>{0});
}

TEST_CASE("ug_search all-equal scores select crop 0 and multiple crops keep spatial order") {
  const auto bundle = plant_scene(6, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);

  // zero-size target overlap everywhere -> every crop disjoint from target
  SyntheticScene far = bundle.scene;
  far.target_x = far.canvas.width - far.target_w - 4;
  far.target_y = far.canvas.height - far.target_h - 4;
  const auto pair = oracle_pair(far, noiseless());

  SearchConfig cfg;
  cfg.crop_fraction = 0.5;
  cfg.stride_fraction = 1.0;  // 4 disjoint quadrants
  cfg.top_k_crops = 2;
  const auto result = ug_search(image, scene_question(far), far.options, pair, cfg);
  REQUIRE(result.candidates.size() == 4u);
  // quadrant 3 contains the target; the other three tie at the ceiling.
  // top-2 = {winner, first tie} returned ascending.
  REQUIRE(result.winning.size() == 2u);
  CHECK(result.winning[0] < result.winning[1]);
}

TEST_CASE("ug_search can re-add the original image for the final answer") {
  const auto bundle = plant_scene(44, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);
  const auto pair = oracle_pair(bundle.scene, noiseless());

  SearchConfig cfg;
  cfg.include_original_in_answer = true;
  const auto with_original = ug_search(image, scene_question(bundle.scene),
                                       bundle.scene.options, pair, cfg);
  cfg.include_original_in_answer = false;
  const auto crops_only = ug_search(image, scene_question(bundle.scene),
                                    bundle.scene.options, pair, cfg);
  // the crop geometry drives the oracle either way; both answer gold
  CHECK(with_original.answer == bundle.scene.gold_answer);
  CHECK(crops_only.answer == bundle.scene.gold_answer);
  CHECK(with_original.winning == crops_only.winning);
}

TEST_CASE("ug_search degrades to the full image when nothing scores") {
  const auto bundle = plant_scene(7, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);
  BackendPair pair;
  pair.scorer = std::make_shared<BrokenBackend>();
  pair.answerer = std::make_shared<AnswerOnlyBackend>();

  const auto result = ug_search(image, "q", {"x", "y"}, pair, SearchConfig{});
  CHECK(result.winning.empty());
  CHECK(result.answer == "A");
  bool degraded = false;
  for (const auto& f : result.flags) degraded |= f == "degraded_full_image_answer";
  CHECK(degraded);
}

TEST_CASE("ug_sample selects the relevant frames and answers gold") {
  VideoParams params;
  params.total_frames = 120;
  params.fps = 3.0;
  params.event_min_len = 40;
  params.event_max_len = 60;
  params.relevant_count = 8;
  const auto bundle = synth_video(55, params);
  const auto frames = materialize(bundle, "v55");
  const auto pair = oracle_pair(bundle.video, noiseless());

  SampleConfig cfg;
  cfg.pool_size = 256;  // pool covers every frame
  cfg.top_k = 8;
  const auto result = ug_sample(frames, "What is the color of the square marker?",
                                bundle.video.options, pair, cfg);
  CHECK(result.selected_frames == bundle.video.relevant_frames);
  CHECK(result.answer == bundle.video.gold_answer);

  // k = 1 equals argmin over the same candidates
  SampleConfig k1 = cfg;
  k1.top_k = 1;
  const auto single = ug_sample(frames, "q", bundle.video.options, pair, k1);
  CHECK(single.selected_frames.size() == 1u);
  CHECK(single.selected_frames[0] ==
        result.pool[static_cast<std::size_t>(argmin_entropy(single.candidates))]);
}

TEST_CASE("ug_sample with pool >= frames and k = frames selects everything") {
  VideoParams params;
  params.total_frames = 12;
  params.event_min_len = 4;
  params.event_max_len = 8;
  params.relevant_count = 3;
  const auto bundle = synth_video(9, params);
  const auto frames = materialize(bundle, "v9");
  const auto pair = oracle_pair(bundle.video, noiseless());

  SampleConfig cfg;
  cfg.pool_size = 64;
  cfg.top_k = 12;
  const auto result = ug_sample(frames, "q", bundle.video.options, pair, cfg);
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[static_cast<std::size_t>(i)] = i;
  CHECK(result.selected_frames == all);
}

TEST_CASE("ug_ground recovers the event interval") {
  VideoParams params;
  params.total_frames = 90;
  params.fps = 3.0;
  params.event_min_len = 46;
  params.event_max_len = 46;
  const auto bundle = synth_video(4, params);
  SyntheticVideo video = bundle.video;
  video.event_start = 30;  // pin the event for an exact expectation
  video.event_end = 76;
  const auto frames = materialize(bundle, "g4");

  OracleBackend scorer(video, noiseless());
  GroundConfig cfg;
  const auto result = ug_ground(frames, "the bright bar", scorer, cfg);

  // Independent derivation: windows [s, s+15) score +1 exactly when they
  // intersect [30, 76), i.e. s in [16, 75]; the max-sum subarray is that
  // run, so the interval is [16/3, (75+15)/3].
  CHECK(result.interval.start_s == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  CHECK(result.interval.end_s == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(result.interval.subarray_sum == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(result.flags.empty());
}

TEST_CASE("ug_ground degenerate cases: all negative and all positive") {
  VideoParams params;
  params.total_frames = 60;
  params.event_min_len = 10;
  params.event_max_len = 20;
  const auto bundle = synth_video(8, params);
  const auto frames = materialize(bundle, "g8");

  // event nowhere -> all windows negative -> single least-negative window
  SyntheticVideo none = bundle.video;
  none.event_start = 0;
  none.event_end = 0;
  OracleBackend none_scorer(none, noiseless());
  const auto neg = ug_ground(frames, "x", none_scorer, GroundConfig{});
  CHECK(neg.interval.window_start == neg.interval.window_end);
  CHECK(neg.interval.subarray_sum == doctest::Approx(-1.0));

  // event everywhere -> interval spans the entire video
  SyntheticVideo all = bundle.video;
  all.event_start = 0;
  all.event_end = 60;
  OracleBackend all_scorer(all, noiseless());
  const auto pos = ug_ground(frames, "x", all_scorer, GroundConfig{});
  CHECK(pos.interval.start_s == doctest::Approx(0.0));
  CHECK(pos.interval.end_s == doctest::Approx(20.0));  // 60 frames / 3 fps
}

TEST_CASE("ug_ground zero-fills unscored windows and flags them") {
  VideoParams params;
  params.total_frames = 30;
  params.event_min_len = 5;
  params.event_max_len = 10;
  const auto bundle = synth_video(2, params);
  const auto frames = materialize(bundle, "g2");

  BrokenBackend scorer;
  const auto result = ug_ground(frames, "x", scorer, GroundConfig{});
  CHECK((result.scores.array() == 0.0).all());
  CHECK(result.flags.size() == static_cast<std::size_t>(result.scores.size()));
}

namespace {

// Delegates to an inner backend after a per-call pseudorandom pause, so
// completion order scrambles under concurrency.
class JitteryBackend final : public Backend {
public:
  explicit JitteryBackend(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {}
  ScoreOutcome score(const ScoringRequest& request) override {
    std::this_thread::sleep_for(std::chrono::microseconds(100 + jitter_.fetch_add(37) % 900));
    return inner_->score(request);
  }
  std::string describe() const override { return "jittery(" + inner_->describe() + ")"; }

private:
  std::shared_ptr<Backend> inner_;
  std::atomic<unsigned> jitter_{0};
};

}  // namespace

TEST_CASE("pipeline output is identical across runs and unaffected by completion order") {
  const auto bundle = plant_scene(321, SceneParams{});
  auto image = std::make_shared<const Image>(bundle.image);
  auto oracle = std::make_shared<OracleBackend>(bundle.scene, OracleParams{});
  BackendPair plain{oracle, oracle};
  auto jittery = std::make_shared<JitteryBackend>(oracle);
  BackendPair scrambled{jittery, jittery};

  SearchConfig cfg;
  cfg.crop_fraction = 0.4;  // keep the grid small so jitter sleeps stay cheap
  const auto a = ug_search(image, scene_question(bundle.scene), bundle.scene.options, plain, cfg, 1);
  const auto b = ug_search(image, scene_question(bundle.scene), bundle.scene.options, plain, cfg, 1);
  const auto c =
      ug_search(image, scene_question(bundle.scene), bundle.scene.options, scrambled, cfg, 4);

  CHECK(a.answer == b.answer);
  CHECK(a.winning == b.winning);
  CHECK(a.answer == c.answer);
  CHECK(a.winning == c.winning);
  REQUIRE(a.candidates.size() == c.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    REQUIRE(a.candidates[i].scored());
    REQUIRE(c.candidates[i].scored());
    CHECK(*a.candidates[i].score == *b.candidates[i].score);  // bit-identical reruns
    CHECK(*a.candidates[i].score == *c.candidates[i].score);  // order-independent assembly
  }
}

TEST_CASE("stride-s and stride-1 grounding agree when scores are block-constant") {
  // The oracle's yes/no law keys noise to the window start frame and steps
  // only at event boundaries, so block-constant profiles arise at noise 0
  // when boundaries align with the stride grid.
  VideoParams params;
  params.total_frames = 100;
  params.event_min_len = 40;
  params.event_max_len = 40;
  const auto bundle = synth_video(20, params);
  SyntheticVideo video = bundle.video;
  video.event_start = 30;  // multiples of 5 keep stride-5 blocks constant
  video.event_end = 70;
  const auto frames = materialize(bundle, "g20");
  OracleBackend scorer(video, noiseless());

  GroundConfig s1;
  GroundConfig s5;
  s5.stride = 5;
  const auto r1 = ug_ground(frames, "x", scorer, s1);
  const auto r5 = ug_ground(frames, "x", scorer, s5);

  // same positive support: the stride-5 interval nests inside the stride-1
  // interval and endpoints differ by less than one stride of frames
  CHECK(r5.interval.start_s >= r1.interval.start_s - 1e-9);
  CHECK(r5.interval.end_s <= r1.interval.end_s + 1e-9);
  CHECK(std::abs(r1.interval.start_s - r5.interval.start_s) <= 5.0 / video.fps + 1e-9);
  CHECK(std::abs(r1.interval.end_s - r5.interval.end_s) <= 5.0 / video.fps + 1e-9);
}

TEST_SUITE_END();
