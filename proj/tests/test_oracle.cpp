#include "ug/oracle.hpp"

#include "ug/metrics.hpp"
#include "ug/rng.hpp"
#include "ug/uncertainty.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace ug;

namespace {

OracleParams noiseless() {
  OracleParams p;
  p.noise_sigma = 0.0;
  p.brc_noise_sigma = 0.0;
  return p;
}

SyntheticScene small_target_scene() {
  SyntheticScene scene;
  scene.seed = 77;
  scene.canvas = ImageGeometry{512, 512};
  scene.target_x = 100;
  scene.target_y = 140;
  scene.target_w = 32;
  scene.target_h = 32;
  scene.gold_answer = "C";
  scene.options = {"red", "green", "blue", "yellow"};
  return scene;
}

ScoringRequest crop_request(const SpatialCrop& crop, TraceMode mode = TraceMode::kFullTrace) {
  ScoringRequest req;
  Visual v;
  v.crop = crop;
  req.visuals.push_back(std::move(v));
  req.prompt = "What is the color?";
  req.mode = mode;
  return req;
}

SyntheticVideo event_video() {
  SyntheticVideo video;
  video.seed = 31;
  video.total_frames = 90;
  video.fps = 3.0;
  video.event_start = 30;
  video.event_end = 76;
  video.relevant_frames = {33, 40, 47, 55, 60, 66, 70, 75};
  video.gold_answer = "B";
  video.options = {"red", "green", "blue", "yellow"};
  return video;
}

ScoringRequest window_request(int start, int len, TraceMode mode) {
  ScoringRequest req;
  for (int f = start; f < start + len; ++f) {
    Visual v;
    v.frame_index = f;
    req.visuals.push_back(std::move(v));
  }
  req.prompt = "is the action depicted?";
  req.mode = mode;
  return req;
}

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("distribution_with_entropy hits the target within 1e-6 nats") {
  Rng rng(911);
  const std::vector<std::string> support{"A", "B", "C", "D"};
  for (int iter = 0; iter < 200; ++iter) {
    const double target = rng.next_range(0.0, std::log(4.0));
    const auto dist = distribution_with_entropy(support, rng.next_int(0, 3) % 4, target);
    CHECK_NOTHROW(dist.validate());
    CHECK(std::abs(shannon_entropy(dist) - target) <= 1e-6);
  }
  // endpoints
  CHECK(shannon_entropy(distribution_with_entropy(support, 0, 0.0)) <= 1e-6);
  CHECK(shannon_entropy(distribution_with_entropy(support, 2, std::log(4.0))) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-9));
  CHECK_THROWS_AS(distribution_with_entropy(support, 0, 2.0), std::invalid_argument);
}

TEST_CASE("full containment with zoom reaches the entropy floor, disjoint the ceiling") {
  const auto scene = small_target_scene();
  OracleBackend oracle(scene, noiseless());

  // 64px crop fully containing the 32px target: zoom term = min(1, 2*32/64) = 1
  const auto contained =
      oracle.score(crop_request(SpatialCrop{0, 90, 130, 64}));
  CHECK(mean_token_entropy(contained.trace) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(contained.text == "C");  // gold
  REQUIRE(contained.trace.steps.size() == 2u);  // answer + end marker

  const auto disjoint = oracle.score(crop_request(SpatialCrop{1, 300, 300, 64}));
  CHECK(mean_token_entropy(disjoint.trace) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-6));
  CHECK(disjoint.text != "C");

  // first-token-only returns exactly one step
  const auto single = oracle.score(crop_request(SpatialCrop{2, 90, 130, 64},
                                                TraceMode::kFirstTokenOnly));
  CHECK(single.trace.steps.size() == 1u);
}

TEST_CASE("entropy is non-increasing in visibility (noise 0)") {
  const auto scene = small_target_scene();
  OracleBackend oracle(scene, noiseless());
  double prev = 10.0;
  // growing overlap: slide a 64px crop from far away onto the target
  for (int x : {400, 300, 200, 150, 120, 100, 95, 90}) {
    const auto outcome = oracle.score(crop_request(SpatialCrop{0, x, 130, 64}));
    const double h = mean_token_entropy(outcome.trace);
    CHECK(h <= prev + 1e-9);
    prev = h;
  }
}

TEST_CASE("zoom series entropy is non-increasing and strictly drops until the cap (noise 0)") {
  const auto scene = small_target_scene();
  OracleBackend oracle(scene, noiseless());
  const auto crops = zoom_series(scene, {1.0, 0.5, 0.25, 0.125});
  double prev = 10.0;
  for (const auto& crop : crops) {
    const double h = mean_token_entropy(oracle.score(crop_request(crop)).trace);
    CHECK(h <= prev + 1e-9);
    prev = h;
  }
  // ratio 0.125 -> side 64 -> zoom term capped at 1 -> floor
  CHECK(prev == doctest::Approx(0.05).epsilon(1e-5));
}

TEST_CASE("oracle traces always satisfy the trace invariants") {
  const auto scene = small_target_scene();
  OracleParams params;  // default noise
  OracleBackend oracle(scene, params);
  Rng rng(5150);
  for (int iter = 0; iter < 100; ++iter) {
    SpatialCrop crop{iter, rng.next_int(0, 400), rng.next_int(0, 400), rng.next_int(16, 112)};
    const auto outcome = oracle.score(crop_request(crop));
    CHECK_NOTHROW(outcome.trace.validate());
    const double h = mean_token_entropy(outcome.trace);
    CHECK(h >= params.entropy_floor - 1e-9);
    CHECK(h <= params.entropy_ceiling + 1e-9);
  }
}

TEST_CASE("oracle is deterministic per (seed, candidate index)") {
  const auto scene = small_target_scene();
  OracleParams params;  // default noise on
  OracleBackend a(scene, params), b(scene, params);
  const auto r1 = a.score(crop_request(SpatialCrop{5, 80, 80, 96}));
  const auto r2 = b.score(crop_request(SpatialCrop{5, 80, 80, 96}));
  CHECK(mean_token_entropy(r1.trace) == mean_token_entropy(r2.trace));
  // a different candidate index draws different noise
  const auto r3 = a.score(crop_request(SpatialCrop{6, 80, 80, 96}));
  CHECK(mean_token_entropy(r3.trace) != mean_token_entropy(r1.trace));
}

TEST_CASE("yes/no probe steps with event intersection") {
  const auto video = event_video();
  OracleBackend oracle(video, noiseless());

  // fully inside the event
  auto inside = oracle.score(window_request(40, 15, TraceMode::kFirstTokenOnly));
  REQUIRE(inside.trace.steps.size() == 1u);
  CHECK(brc_score(inside.trace.steps[0], {"A", "yes"}, {"B", "no"}) == doctest::Approx(1.0));
  CHECK(inside.text == "A");

  // fully outside
  auto outside = oracle.score(window_request(0, 15, TraceMode::kFirstTokenOnly));
  CHECK(brc_score(outside.trace.steps[0], {"A", "yes"}, {"B", "no"}) == doctest::Approx(-1.0));
  CHECK(outside.text == "B");

  // touching by one frame counts as depicted
  auto touch = oracle.score(window_request(16, 15, TraceMode::kFirstTokenOnly));
  CHECK(brc_score(touch.trace.steps[0], {"A", "yes"}, {"B", "no"}) == doctest::Approx(1.0));
}

TEST_CASE("frame-pool entropy probe uses the relevant fraction") {
  const auto video = event_video();
  OracleBackend oracle(video, noiseless());

  // a relevant single frame reaches the floor and answers gold
  auto rel = oracle.score(window_request(40, 1, TraceMode::kFullTrace));
  CHECK(mean_token_entropy(rel.trace) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(rel.text == "B");

  // an irrelevant frame sits at the ceiling and answers wrong
  auto irr = oracle.score(window_request(41, 1, TraceMode::kFullTrace));
  CHECK(mean_token_entropy(irr.trace) == doctest::Approx(std::log(4.0)).epsilon(1e-6));
  CHECK(irr.text != "B");
}

TEST_CASE("brc is non-decreasing in event overlap (noise 0)") {
  const auto video = event_video();
  OracleBackend oracle(video, noiseless());
  double prev = -2.0;
  for (int start : {0, 10, 16, 30, 45}) {  // increasing overlap with [30, 76)
    auto out = oracle.score(window_request(start, 15, TraceMode::kFirstTokenOnly));
    const double b = brc_score(out.trace.steps[0], {"A"}, {"B"});
    CHECK(b >= prev - 1e-12);
    prev = b;
  }
}

TEST_CASE("multi-crop requests are judged by the clearest view of the target") {
  const auto scene = small_target_scene();
  OracleBackend oracle(scene, noiseless());

  // target-containing crop listed FIRST, a far crop after it
  ScoringRequest req;
  Visual good;
  good.crop = SpatialCrop{0, 90, 130, 64};
  Visual far;
  far.crop = SpatialCrop{1, 400, 400, 64};
  req.visuals = {good, far};
  req.prompt = "q";
  const auto outcome = oracle.score(req);
  CHECK(outcome.text == scene.gold_answer);
  CHECK(mean_token_entropy(outcome.trace) == doctest::Approx(0.05).epsilon(1e-5));

  // the accompanying full image never raises a disjoint crop's visibility
  ScoringRequest scored;
  Visual original;  // no geometry: the full canvas
  scored.visuals = {original, far};
  scored.prompt = "q";
  const auto far_only = oracle.score(scored);
  CHECK(mean_token_entropy(far_only.trace) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-6));
}

TEST_CASE("unrecognized request shapes are rejected") {
  OracleBackend scene_oracle(small_target_scene(), noiseless());
  ScoringRequest empty;
  empty.prompt = "q";
  CHECK_THROWS_AS(scene_oracle.score(empty), std::invalid_argument);

  OracleBackend video_oracle(event_video(), noiseless());
  ScoringRequest no_frames;
  no_frames.prompt = "q";
  Visual v;
  v.crop = SpatialCrop{0, 0, 0, 8};
  no_frames.visuals.push_back(v);
  CHECK_THROWS_AS(video_oracle.score(no_frames), std::invalid_argument);
}

TEST_CASE("recovering the inverse entropy law: pearson <= -0.8 at default noise") {
  // Regress oracle entropy against the zoom-in factor over 50 seeds.
  std::vector<double> entropies, zoom;
  const std::vector<double> ratios{1.0, 0.5, 0.25, 0.125};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto bundle = plant_scene(seed, SceneParams{});
    OracleBackend oracle(bundle.scene, OracleParams{});
    const auto crops = zoom_series(bundle.scene, ratios);
    for (std::size_t r = 0; r < crops.size(); ++r) {
      entropies.push_back(mean_token_entropy(oracle.score(crop_request(crops[r])).trace));
      zoom.push_back(1.0 / ratios[r]);
    }
  }
  const double r = pearson(
      Eigen::Map<const Eigen::VectorXd>(entropies.data(), static_cast<long>(entropies.size())),
      Eigen::Map<const Eigen::VectorXd>(zoom.data(), static_cast<long>(zoom.size())));
  CHECK(r <= -0.8);
}

TEST_CASE("worlds sidecar round trips") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / ("ug_worlds_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "worlds.jsonl");
    out << world_to_json("s0", small_target_scene()).dump() << "\n";
    out << world_to_json("v0", event_video()).dump() << "\n";
  }
  const auto worlds = load_worlds((dir / "worlds.jsonl").string());
  REQUIRE(worlds.size() == 2u);
  REQUIRE(std::holds_alternative<SyntheticScene>(worlds.at("s0")));
  REQUIRE(std::holds_alternative<SyntheticVideo>(worlds.at("v0")));
  CHECK(std::get<SyntheticScene>(worlds.at("s0")).target_w == 32);
  CHECK(std::get<SyntheticVideo>(worlds.at("v0")).event_end == 76);
  fs::remove_all(dir);
}

TEST_SUITE_END();
