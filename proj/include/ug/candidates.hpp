#pragma once

/**
 * @file candidates.hpp
 * @brief Candidate generators: sliding-window square crops over an image,
 *        uniform frame pools, and sliding temporal windows over a frame
 *        sequence.
 *
 * All generators are pure and deterministic; identical inputs yield the
 * same ordered output. Sliding windows clamp their final position to the
 * boundary so the full image / timeline is always covered.
 */

#include <string>
#include <utility>
#include <vector>

namespace ug {

struct ImageGeometry {
  int width = 0;
  int height = 0;
};

/// Square window over an image, in source-image pixel coordinates.
struct SpatialCrop {
  int index = 0;  // emission order within its grid
  int x = 0;
  int y = 0;
  int side = 0;

  bool contains(double px, double py) const {
    return px >= x && px < x + side && py >= y && py < y + side;
  }
};

/// Contiguous run of frames [start_frame, start_frame + length).
struct TemporalWindow {
  int index = 0;
  int start_frame = 0;
  int length = 1;
};

/// An on-disk video: ordered frame image paths plus the sampling clock.
struct FrameSequence {
  std::vector<std::string> frame_refs;
  double fps = 1.0;

  int frame_count() const { return static_cast<int>(frame_refs.size()); }
};

/// Row-major sliding grid of square crops. The crop side is
/// round(min(width, height) * crop_fraction) and the step is
/// round(side * stride_fraction), at least one pixel each. On both axes the
/// final window is clamped to end exactly at the image edge; duplicate
/// positions created by the clamp are dropped. Throws when the geometry or
/// fractions leave no valid window.
std::vector<SpatialCrop> grid_crops(const ImageGeometry& geom,
                                    double crop_fraction = 1.0 / 6.0,
                                    double stride_fraction = 0.5);

/// Pool of up to pool_size frame indices. When the video has no more than
/// pool_size frames every frame is returned; otherwise indices are placed
/// at interval midpoints, floor((i + 0.5) * total / pool), which spreads
/// the pool evenly without double-weighting either end.
std::vector<int> uniform_frame_indices(int total_frames, int pool_size = 256);

/// Sliding temporal windows starting at multiples of stride, final window
/// clamped to end at the last frame. A video shorter than window_len yields
/// a single window covering everything.
std::vector<TemporalWindow> temporal_windows(int total_frames, int window_len,
                                             int stride = 1);

/// Maps a window to seconds under the half-open convention:
/// [start_frame / fps, (start_frame + length) / fps).
std::pair<double, double> window_to_seconds(const TemporalWindow& window, double fps);

}  // namespace ug
