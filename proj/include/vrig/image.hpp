#pragma once

// 8-bit RGB image buffer with a per-pixel validity mask, binary PPM (P6)
// input/output, and the two warp sampling modes.
//
// Continuous image coordinates follow the pixel-center convention: integer
// pixel (i, j) covers [i, i+1) x [j, j+1) and samples at (i+0.5, j+0.5).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "vrig/errors.hpp"
#include "vrig/geometry.hpp"
#include "vrig/text.hpp"

namespace vrig {

struct ImageBuffer {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;
  std::vector<uint8_t> samples;  // row-major RGB
  std::vector<uint8_t> mask;     // 1 = valid, 0 = invalid

  ImageBuffer() = default;
  ImageBuffer(int w, int h, uint8_t fill = 0, uint8_t valid = 1)
      : width(w),
        height(h),
        samples(static_cast<size_t>(w) * h * channels, fill),
        mask(static_cast<size_t>(w) * h, valid) {
    if (w < 1 || h < 1) throw std::invalid_argument("image: size must be at least 1x1");
  }

  size_t pixel_index(int x, int y) const { return static_cast<size_t>(y) * width + x; }

  uint8_t at(int x, int y, int c) const { return samples[pixel_index(x, y) * channels + c]; }
  void set(int x, int y, int c, uint8_t v) { samples[pixel_index(x, y) * channels + c] = v; }
  void set_rgb(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
    const size_t i = pixel_index(x, y) * channels;
    samples[i] = r;
    samples[i + 1] = g;
    samples[i + 2] = b;
  }
  bool valid(int x, int y) const { return mask[pixel_index(x, y)] != 0; }
  void set_valid(int x, int y, bool v) { mask[pixel_index(x, y)] = v ? 1 : 0; }
};

enum class Sampling { Bilinear, Nearest };

// Bilinear sample of one channel at continuous (u, v), edge-clamped.
inline double sample_bilinear(const ImageBuffer& img, double u, double v, int c) {
  const double x = u - 0.5;
  const double y = v - 0.5;
  const double xf = std::floor(x);
  const double yf = std::floor(y);
  const double ax = x - xf;
  const double ay = y - yf;
  const int x0 = std::clamp(static_cast<int>(xf), 0, img.width - 1);
  const int x1 = std::clamp(static_cast<int>(xf) + 1, 0, img.width - 1);
  const int y0 = std::clamp(static_cast<int>(yf), 0, img.height - 1);
  const int y1 = std::clamp(static_cast<int>(yf) + 1, 0, img.height - 1);
  const double top = (1.0 - ax) * img.at(x0, y0, c) + ax * img.at(x1, y0, c);
  const double bot = (1.0 - ax) * img.at(x0, y1, c) + ax * img.at(x1, y1, c);
  return (1.0 - ay) * top + ay * bot;
}

// Nearest-neighbor sample: the pixel whose cell contains (u, v).
inline double sample_nearest(const ImageBuffer& img, double u, double v, int c) {
  const int x = std::clamp(static_cast<int>(std::floor(u)), 0, img.width - 1);
  const int y = std::clamp(static_cast<int>(std::floor(v)), 0, img.height - 1);
  return img.at(x, y, c);
}

inline double sample(const ImageBuffer& img, double u, double v, int c, Sampling mode) {
  return mode == Sampling::Bilinear ? sample_bilinear(img, u, v, c)
                                    : sample_nearest(img, u, v, c);
}

// --- binary PPM (P6, maxval 255) ---

inline void write_ppm(const std::string& path, const ImageBuffer& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image '" + path + "'");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
  if (!out) throw IoError("write failed for image '" + path + "'");
}

// Writes the validity mask as a white-on-black PPM.
inline void write_mask_ppm(const std::string& path, const ImageBuffer& img) {
  ImageBuffer m(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const uint8_t v = img.valid(x, y) ? 255 : 0;
      m.set_rgb(x, y, v, v, v);
    }
  write_ppm(path, m);
}

namespace detail {
// Reads one whitespace-delimited PPM header token, skipping '#' comments.
inline std::string ppm_token(std::istream& in, const std::string& path) {
  std::string tok;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (tok.empty()) throw ParseError(path + ": truncated PPM header");
  return tok;
}
}  // namespace detail

inline ImageBuffer read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path + "'");
  if (detail::ppm_token(in, path) != "P6") throw ParseError(path + ": not a binary PPM (P6)");
  const int64_t w = parse_int(detail::ppm_token(in, path), path + " width");
  const int64_t h = parse_int(detail::ppm_token(in, path), path + " height");
  const int64_t maxval = parse_int(detail::ppm_token(in, path), path + " maxval");
  if (w < 1 || h < 1 || w > 1 << 16 || h > 1 << 16)
    throw ParseError(path + ": unreasonable PPM dimensions");
  if (maxval != 255) throw ParseError(path + ": only maxval 255 PPMs are supported");
  // The header ends with exactly one whitespace byte, already consumed by
  // ppm_token's trailing-delimiter read; raster data starts here.
  ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(img.samples.data()),
          static_cast<std::streamsize>(img.samples.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.samples.size()))
    throw ParseError(path + ": truncated PPM raster");
  return img;
}

}  // namespace vrig
