#pragma once

/**
 * @file image.hpp
 * @brief Planar RGB raster on Eigen arrays, bilinear resampling, and
 *        PNG/JPEG file I/O.
 *
 * Channels are stored as Eigen::ArrayXXf planes indexed (row, col) with
 * values in [0, 1]. 8-bit files map through v/255 on decode and
 * round(v*255) on encode, so a decode→encode round trip is lossless.
 */

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ug {

struct SpatialCrop;  // candidates.hpp

struct Image {
  int width = 0;
  int height = 0;
  std::array<Eigen::ArrayXXf, 3> ch;  // r, g, b planes, (height, width)

  static Image filled(int width, int height, float r, float g, float b);
  bool empty() const { return width == 0 || height == 0; }
};

/// Axis-aligned rectangle fill, clipped to the image bounds.
void fill_rect(Image& img, int x, int y, int w, int h, float r, float g, float b);

/// Filled circle, clipped to the image bounds.
void fill_circle(Image& img, int cx, int cy, int radius, float r, float g, float b);

/// Upright isoceles triangle inscribed in the given box, clipped to bounds.
void fill_triangle(Image& img, int x, int y, int w, int h, float r, float g, float b);

/// Bilinear resample to (out_width, out_height). Sample positions use the
/// pixel-center convention src = (dst + 0.5) * scale - 0.5 with edge clamp;
/// an identity-size resize reproduces the input exactly.
Image bilinear_resize(const Image& img, int out_width, int out_height);

/// Copies the crop's square region out of the image. Throws if the crop is
/// not fully inside the image.
Image extract_region(const Image& img, const SpatialCrop& crop);

/// Extracts the crop and rescales it to target_side x target_side
/// (bilinear). Pass target_side <= 0 to use min(width, height) of the
/// source image, i.e. scale the crop back up to the source resolution.
Image render_crop(const Image& img, const SpatialCrop& crop, int target_side = 0);

/// Encodes as 8-bit RGB PNG. Deterministic: identical pixels yield
/// identical bytes.
std::vector<std::uint8_t> encode_png(const Image& img);
void write_png(const Image& img, const std::string& path);

/// Decodes a PNG or JPEG file, dispatching on the file extension
/// (.png / .jpg / .jpeg, case-insensitive). Throws std::runtime_error on
/// unsupported extensions or undecodable content.
Image load_image(const std::string& path);

Image decode_png(const std::vector<std::uint8_t>& bytes);

}  // namespace ug
