#include "ug/candidates.hpp"

#include "ug/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <set>
#include <vector>

using namespace ug;

TEST_SUITE_BEGIN("candidates");

TEST_CASE("grid crops: derived 1200x600 layout at defaults") {
  // side = round(600/6) = 100, step = 50; x starts {0,50,...,1100},
  // y starts {0,50,...,500}; enumerated independently: 23 * 11 positions.
  const auto crops = grid_crops(ImageGeometry{1200, 600});
  CHECK(crops.size() == 23u * 11u);
  CHECK(crops.front().side == 100);
  std::set<int> xs, ys;
  for (const auto& c : crops) {
    xs.insert(c.x);
    ys.insert(c.y);
    CHECK(c.x % 50 == 0);
    CHECK(c.y % 50 == 0);
  }
  CHECK(xs.size() == 23u);
  CHECK(*xs.rbegin() == 1100);
  CHECK(ys.size() == 11u);
  CHECK(*ys.rbegin() == 500);
}

TEST_CASE("grid crops: stride fraction 1 tiles exactly") {
  const auto crops = grid_crops(ImageGeometry{600, 600}, 0.5, 1.0);
  REQUIRE(crops.size() == 4u);
  CHECK(crops[0].x == 0);
  CHECK(crops[1].x == 300);
  CHECK(crops[3].y == 300);
  for (const auto& c : crops) CHECK(c.side == 300);
}

TEST_CASE("grid crops: half stride overlaps windows") {
  // side 300, step 150: starts {0, 150, 300} per axis.
  const auto crops = grid_crops(ImageGeometry{600, 600}, 0.5, 0.5);
  CHECK(crops.size() == 9u);
}

TEST_CASE("grid crops: fraction 1 is the identity crop") {
  const auto crops = grid_crops(ImageGeometry{100, 100}, 1.0, 0.5);
  REQUIRE(crops.size() == 1u);
  CHECK(crops[0].x == 0);
  CHECK(crops[0].y == 0);
  CHECK(crops[0].side == 100);
}

TEST_CASE("grid crops: rejected inputs") {
  CHECK_THROWS_AS(grid_crops(ImageGeometry{0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(grid_crops(ImageGeometry{100, 100}, 0.001, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(grid_crops(ImageGeometry{100, 100}, 1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(grid_crops(ImageGeometry{100, 100}, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("grid crops: coverage and bounds over random geometries") {
  Rng rng(31337);
  for (int iter = 0; iter < 50; ++iter) {
    const ImageGeometry geom{rng.next_int(16, 2048), rng.next_int(16, 2048)};
    const auto crops = grid_crops(geom);
    REQUIRE(!crops.empty());

    std::vector<bool> covered_x(static_cast<std::size_t>(geom.width), false);
    std::vector<bool> covered_y(static_cast<std::size_t>(geom.height), false);
    std::set<std::pair<int, int>> positions;
    int index = 0;
    for (const auto& c : crops) {
      CHECK(c.index == index++);
      CHECK(c.x >= 0);
      CHECK(c.y >= 0);
      CHECK(c.side >= 1);
      CHECK(c.x + c.side <= geom.width);
      CHECK(c.y + c.side <= geom.height);
      CHECK(positions.insert({c.x, c.y}).second);  // no duplicate windows
      for (int x = c.x; x < c.x + c.side; ++x) covered_x[static_cast<std::size_t>(x)] = true;
      for (int y = c.y; y < c.y + c.side; ++y) covered_y[static_cast<std::size_t>(y)] = true;
    }
    // The grid is a cartesian product of axis positions, so full coverage on
    // both axes covers every pixel.
    for (bool b : covered_x) CHECK(b);
    for (bool b : covered_y) CHECK(b);
  }
}

TEST_CASE("uniform frame indices") {
  CHECK(uniform_frame_indices(8, 8) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(uniform_frame_indices(4, 8) == std::vector<int>{0, 1, 2, 3});
  // midpoint formula evaluated independently: floor((i+0.5)*10)
  CHECK(uniform_frame_indices(100, 10) ==
        std::vector<int>{5, 15, 25, 35, 45, 55, 65, 75, 85, 95});
}

TEST_CASE("uniform frame indices are strictly increasing") {
  Rng rng(555);
  for (int iter = 0; iter < 200; ++iter) {
    const int total = rng.next_int(1, 5000);
    const int pool = rng.next_int(1, 512);
    const auto idx = uniform_frame_indices(total, pool);
    REQUIRE(!idx.empty());
    CHECK(idx.size() <= static_cast<std::size_t>(std::min(total, pool)));
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i] > idx[i - 1]);
    CHECK(idx.front() >= 0);
    CHECK(idx.back() < total);
  }
}

TEST_CASE("temporal windows") {
  const auto five = temporal_windows(5, 1, 1);
  REQUIRE(five.size() == 5u);
  for (int i = 0; i < 5; ++i) {
    CHECK(five[static_cast<std::size_t>(i)].start_frame == i);
    CHECK(five[static_cast<std::size_t>(i)].length == 1);
  }

  // derived: 20 frames, window 15, stride 1 -> starts 0..5
  const auto six = temporal_windows(20, 15, 1);
  REQUIRE(six.size() == 6u);
  for (int i = 0; i < 6; ++i) CHECK(six[static_cast<std::size_t>(i)].start_frame == i);

  // shorter than the window: one clamped window over everything
  const auto one = temporal_windows(10, 15, 1);
  REQUIRE(one.size() == 1u);
  CHECK(one[0].start_frame == 0);
  CHECK(one[0].length == 10);
}

TEST_CASE("temporal windows clamp the final stride step") {
  const auto w = temporal_windows(20, 15, 4);  // starts 0, 4, then clamp at 5
  REQUIRE(w.size() == 3u);
  CHECK(w[0].start_frame == 0);
  CHECK(w[1].start_frame == 4);
  CHECK(w[2].start_frame == 5);
  for (const auto& win : w) CHECK(win.start_frame + win.length <= 20);
}

TEST_CASE("temporal windows: bounds and monotonicity fuzz") {
  Rng rng(808);
  for (int iter = 0; iter < 200; ++iter) {
    const int total = rng.next_int(1, 600);
    const int len = rng.next_int(1, 40);
    const int stride = rng.next_int(1, 10);
    const auto windows = temporal_windows(total, len, stride);
    REQUIRE(!windows.empty());
    CHECK(windows.front().start_frame == 0);
    int prev = -1;
    for (const auto& w : windows) {
      CHECK(w.start_frame > prev);
      prev = w.start_frame;
      CHECK(w.length >= 1);
      CHECK(w.start_frame + w.length <= total);
    }
    // full coverage: last window ends at the final frame
    CHECK(windows.back().start_frame + windows.back().length == total);
  }
}

TEST_CASE("window_to_seconds uses the half-open convention") {
  CHECK(window_to_seconds(TemporalWindow{0, 0, 15}, 3.0) == std::pair{0.0, 5.0});
  CHECK(window_to_seconds(TemporalWindow{0, 30, 15}, 3.0) == std::pair{10.0, 15.0});
  CHECK(window_to_seconds(TemporalWindow{0, 7, 1}, 1.0) == std::pair{7.0, 8.0});
  CHECK_THROWS_AS(window_to_seconds(TemporalWindow{0, 0, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("window_to_seconds preserves temporal order") {
  Rng rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    const double fps = rng.next_range(0.5, 60.0);
    const auto windows = temporal_windows(rng.next_int(2, 400), rng.next_int(1, 20),
                                          rng.next_int(1, 6));
    for (std::size_t i = 1; i < windows.size(); ++i) {
      CHECK(window_to_seconds(windows[i], fps).first >
            window_to_seconds(windows[i - 1], fps).first);
    }
  }
}

TEST_SUITE_END();
