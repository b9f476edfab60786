#include "ug/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ug {

namespace {

// Window start positions along one axis: 0, step, 2*step, ... with the last
// start clamped to limit - side so the final window ends at the edge.
std::vector<int> axis_positions(int limit, int side, int step) {
  std::vector<int> pos;
  const int last = limit - side;
  for (int x = 0; x < last; x += step) pos.push_back(x);
  pos.push_back(last);
  return pos;
}

}  // namespace

std::vector<SpatialCrop> grid_crops(const ImageGeometry& geom, double crop_fraction,
                                    double stride_fraction) {
  if (geom.width < 1 || geom.height < 1) {
    throw std::invalid_argument("grid_crops: geometry must be at least 1x1");
  }
  if (!(crop_fraction > 0.0 && crop_fraction <= 1.0)) {
    throw std::invalid_argument("grid_crops: crop_fraction must be in (0, 1]");
  }
  if (!(stride_fraction > 0.0 && stride_fraction <= 1.0)) {
    throw std::invalid_argument("grid_crops: stride_fraction must be in (0, 1]");
  }
  const int smaller = std::min(geom.width, geom.height);
  const int side = static_cast<int>(std::lround(smaller * crop_fraction));
  if (side < 1) {
    throw std::invalid_argument("grid_crops: crop side rounds below one pixel");
  }
  const int step = std::max(1, static_cast<int>(std::lround(side * stride_fraction)));

  const auto xs = axis_positions(geom.width, side, step);
  const auto ys = axis_positions(geom.height, side, step);

  std::vector<SpatialCrop> crops;
  crops.reserve(xs.size() * ys.size());
  int index = 0;
  for (int y : ys) {
    for (int x : xs) {
      crops.push_back(SpatialCrop{index++, x, y, side});
    }
  }
  return crops;
}

std::vector<int> uniform_frame_indices(int total_frames, int pool_size) {
  if (total_frames < 1) throw std::invalid_argument("uniform_frame_indices: no frames");
  if (pool_size < 1) throw std::invalid_argument("uniform_frame_indices: pool_size < 1");

  std::vector<int> indices;
  if (total_frames <= pool_size) {
    indices.resize(static_cast<std::size_t>(total_frames));
    for (int i = 0; i < total_frames; ++i) indices[static_cast<std::size_t>(i)] = i;
    return indices;
  }
  indices.reserve(static_cast<std::size_t>(pool_size));
  for (int i = 0; i < pool_size; ++i) {
    const double pos = (i + 0.5) * static_cast<double>(total_frames) / pool_size;
    int idx = static_cast<int>(std::floor(pos));
    idx = std::clamp(idx, 0, total_frames - 1);
    if (indices.empty() || indices.back() != idx) indices.push_back(idx);
  }
  return indices;
}

std::vector<TemporalWindow> temporal_windows(int total_frames, int window_len, int stride) {
  if (total_frames < 1) throw std::invalid_argument("temporal_windows: no frames");
  if (window_len < 1) throw std::invalid_argument("temporal_windows: window_len < 1");
  if (stride < 1) throw std::invalid_argument("temporal_windows: stride < 1");

  std::vector<TemporalWindow> windows;
  if (total_frames <= window_len) {
    windows.push_back(TemporalWindow{0, 0, total_frames});
    return windows;
  }
  const int last = total_frames - window_len;
  int index = 0;
  for (int s = 0; s < last; s += stride) {
    windows.push_back(TemporalWindow{index++, s, window_len});
  }
  windows.push_back(TemporalWindow{index, last, window_len});
  return windows;
}

std::pair<double, double> window_to_seconds(const TemporalWindow& window, double fps) {
  if (!(fps > 0.0)) throw std::invalid_argument("window_to_seconds: fps must be positive");
  const double start = window.start_frame / fps;
  const double end = (window.start_frame + window.length) / fps;
  return {start, end};
}

}  // namespace ug
