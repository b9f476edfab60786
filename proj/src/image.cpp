#include "ug/image.hpp"

#include "ug/candidates.hpp"

#include <png.h>

#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ug {

namespace {

float clamp01(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

std::uint8_t to_byte(float v) {
  return static_cast<std::uint8_t>(std::lround(clamp01(v) * 255.0f));
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Image from_rgb8(const std::vector<std::uint8_t>& rgb, int width, int height) {
  Image img;
  img.width = width;
  img.height = height;
  for (auto& plane : img.ch) plane.resize(height, width);
  const std::uint8_t* p = rgb.data();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.ch[0](y, x) = p[0] / 255.0f;
      img.ch[1](y, x) = p[1] / 255.0f;
      img.ch[2](y, x) = p[2] / 255.0f;
      p += 3;
    }
  }
  return img;
}

std::vector<std::uint8_t> to_rgb8(const Image& img) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.width) * img.height * 3);
  std::uint8_t* p = rgb.data();
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      *p++ = to_byte(img.ch[0](y, x));
      *p++ = to_byte(img.ch[1](y, x));
      *p++ = to_byte(img.ch[2](y, x));
    }
  }
  return rgb;
}

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

struct PngReadState {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

void png_consume(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->offset + len > st->size) png_error(png, "png: truncated stream");
  std::memcpy(out, st->data + st->offset, len);
  st->offset += len;
}

struct JpegErrorJump {
  jpeg_error_mgr mgr;
  std::jmp_buf env;
};

void jpeg_error_trampoline(j_common_ptr info) {
  auto* err = reinterpret_cast<JpegErrorJump*>(info->err);
  std::longjmp(err->env, 1);
}

Image decode_jpeg_file(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("jpeg: cannot open " + path);

  jpeg_decompress_struct cinfo;
  JpegErrorJump err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_trampoline;

  std::vector<std::uint8_t> rgb;
  int width = 0, height = 0;
  if (setjmp(err.env)) {
    jpeg_destroy_decompress(&cinfo);
    std::fclose(fp);
    throw std::runtime_error("jpeg: cannot decode " + path);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  rgb.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    std::uint8_t* row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(fp);
  return from_rgb8(rgb, width, height);
}

}  // namespace

Image Image::filled(int width, int height, float r, float g, float b) {
  Image img;
  img.width = width;
  img.height = height;
  img.ch[0] = Eigen::ArrayXXf::Constant(height, width, r);
  img.ch[1] = Eigen::ArrayXXf::Constant(height, width, g);
  img.ch[2] = Eigen::ArrayXXf::Constant(height, width, b);
  return img;
}

void fill_rect(Image& img, int x, int y, int w, int h, float r, float g, float b) {
  const int x0 = std::max(0, x);
  const int y0 = std::max(0, y);
  const int x1 = std::min(img.width, x + w);
  const int y1 = std::min(img.height, y + h);
  if (x0 >= x1 || y0 >= y1) return;
  img.ch[0].block(y0, x0, y1 - y0, x1 - x0).setConstant(r);
  img.ch[1].block(y0, x0, y1 - y0, x1 - x0).setConstant(g);
  img.ch[2].block(y0, x0, y1 - y0, x1 - x0).setConstant(b);
}

void fill_circle(Image& img, int cx, int cy, int radius, float r, float g, float b) {
  const int x0 = std::max(0, cx - radius);
  const int y0 = std::max(0, cy - radius);
  const int x1 = std::min(img.width - 1, cx + radius);
  const int y1 = std::min(img.height - 1, cy + radius);
  const long r2 = static_cast<long>(radius) * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const long dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r2) {
        img.ch[0](y, x) = r;
        img.ch[1](y, x) = g;
        img.ch[2](y, x) = b;
      }
    }
  }
}

void fill_triangle(Image& img, int x, int y, int w, int h, float r, float g, float b) {
  // Apex at top-center, base along the bottom edge of the box.
  for (int row = 0; row < h; ++row) {
    const int py = y + row;
    if (py < 0 || py >= img.height) continue;
    const double half = (w / 2.0) * (row + 1) / h;
    const int x0 = std::max(0, static_cast<int>(std::lround(x + w / 2.0 - half)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::lround(x + w / 2.0 + half)));
    for (int px = x0; px <= x1; ++px) {
      img.ch[0](py, px) = r;
      img.ch[1](py, px) = g;
      img.ch[2](py, px) = b;
    }
  }
}

Image bilinear_resize(const Image& img, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) {
    throw std::invalid_argument("bilinear_resize: output must be at least 1x1");
  }
  if (img.empty()) throw std::invalid_argument("bilinear_resize: empty input");

  Image out;
  out.width = out_width;
  out.height = out_height;
  for (auto& plane : out.ch) plane.resize(out_height, out_width);

  const double sx = static_cast<double>(img.width) / out_width;
  const double sy = static_cast<double>(img.height) / out_height;

  std::vector<int> xl(static_cast<std::size_t>(out_width)), xh(static_cast<std::size_t>(out_width));
  std::vector<float> xt(static_cast<std::size_t>(out_width));
  for (int x = 0; x < out_width; ++x) {
    const double pos = (x + 0.5) * sx - 0.5;
    const int lo = static_cast<int>(std::floor(pos));
    xt[static_cast<std::size_t>(x)] = static_cast<float>(pos - lo);
    xl[static_cast<std::size_t>(x)] = std::clamp(lo, 0, img.width - 1);
    xh[static_cast<std::size_t>(x)] = std::clamp(lo + 1, 0, img.width - 1);
  }

  for (int y = 0; y < out_height; ++y) {
    const double pos = (y + 0.5) * sy - 0.5;
    const int lo = static_cast<int>(std::floor(pos));
    const float ty = static_cast<float>(pos - lo);
    const int yl = std::clamp(lo, 0, img.height - 1);
    const int yh = std::clamp(lo + 1, 0, img.height - 1);
    for (int c = 0; c < 3; ++c) {
      const auto& src = img.ch[static_cast<std::size_t>(c)];
      auto& dst = out.ch[static_cast<std::size_t>(c)];
      for (int x = 0; x < out_width; ++x) {
        const std::size_t xi = static_cast<std::size_t>(x);
        const float tx = xt[xi];
        const float top = src(yl, xl[xi]) * (1.0f - tx) + src(yl, xh[xi]) * tx;
        const float bot = src(yh, xl[xi]) * (1.0f - tx) + src(yh, xh[xi]) * tx;
        dst(y, x) = top * (1.0f - ty) + bot * ty;
      }
    }
  }
  return out;
}

Image extract_region(const Image& img, const SpatialCrop& crop) {
  if (crop.x < 0 || crop.y < 0 || crop.side < 1 || crop.x + crop.side > img.width ||
      crop.y + crop.side > img.height) {
    throw std::invalid_argument("extract_region: crop outside image bounds");
  }
  Image out;
  out.width = crop.side;
  out.height = crop.side;
  for (int c = 0; c < 3; ++c) {
    out.ch[static_cast<std::size_t>(c)] =
        img.ch[static_cast<std::size_t>(c)].block(crop.y, crop.x, crop.side, crop.side);
  }
  return out;
}

Image render_crop(const Image& img, const SpatialCrop& crop, int target_side) {
  Image region = extract_region(img, crop);
  const int target = target_side > 0 ? target_side : std::min(img.width, img.height);
  if (target == region.width && target == region.height) return region;
  return bilinear_resize(region, target, target);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.empty()) throw std::invalid_argument("encode_png: empty image");
  std::vector<std::uint8_t> rgb = to_rgb8(img);
  std::vector<std::uint8_t> out;

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: encode failed");
  }
  png_set_write_fn(png, &out, png_append, nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, rgb.data() + static_cast<std::size_t>(y) * img.width * 3);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const Image& img, const std::string& path) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("png: cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("png: short write to " + path);
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  std::vector<std::uint8_t> rgb;
  std::vector<png_bytep> rows;
  PngReadState state{bytes.data(), bytes.size(), 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: decode failed");
  }
  png_set_read_fn(png, &state, png_consume);
  png_read_info(png, info);

  // Normalize everything to 8-bit RGB.
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  rgb.resize(static_cast<std::size_t>(width) * height * 3);
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = rgb.data() + static_cast<std::size_t>(y) * width * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return from_rgb8(rgb, width, height);
}

Image load_image(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "png") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("png: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_png(bytes);
  }
  if (ext == "jpg" || ext == "jpeg") return decode_jpeg_file(path);
  throw std::runtime_error("load_image: unsupported extension for " + path);
}

}  // namespace ug
