#pragma once

// Ground-aware depth assumption, virtual-to-source pixel correspondence,
// warp-map construction, and multi-view blending.
//
// Every virtual pixel is assigned a 3D point under a two-branch assumption:
// if the pixel's viewing ray hits the assumed ground plane closer than D_0,
// the point is that ground intersection; otherwise it lies on the sphere of
// radius D_0 about the virtual optical center. The point is re-projected
// into each source camera to build a per-pixel table of sample locations
// and blend weights, which is then applied to source images.
//
// The ground plane of the assumption sits h_c below the virtual camera
// center (world y = center_y + h_c). For a camera mounted h_c above the
// real ground (translation.y == -h_c) that is exactly the world plane y=0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "vrig/errors.hpp"
#include "vrig/geometry.hpp"
#include "vrig/image.hpp"

namespace vrig {

// Pixels whose ray satisfies fy * dir_y <= this (i.e. v - cy <= eps for a
// level camera) are at or above the horizon and take the sphere branch.
inline constexpr double kHorizonEps = 1e-6;

// Default blend-weight falloff exponent (cosine power).
inline constexpr double kDefaultWeightExponent = 4.0;

struct DepthAssumption {
  double camera_height = 1.6;       // h_c, meters above the assumed ground
  double distance_threshold = 50.0;  // D_0, meters

  void validate() const {
    if (!(camera_height > 0.0))
      throw std::invalid_argument("depth assumption: camera height must be positive");
    if (!(distance_threshold > camera_height))
      throw std::invalid_argument(
          "depth assumption: distance threshold must exceed camera height");
  }
};

struct GroundHit {
  CamPoint point;   // virtual-camera frame
  double distance;  // D-hat, meters from the virtual optical center
};

// Intersects the pixel's viewing ray with the assumed ground plane h_c
// below the camera center. Returns empty at or above the horizon. Works in
// the world frame so tilted cameras are exact; for a level camera the
// result reduces to the classic flat-ground back-projection
//   X = (fy (u-cx))/(fx (v-cy)) h_c,  Y = h_c,  Z = fy/(v-cy) h_c.
inline std::optional<GroundHit> ground_point(const Camera& cam, const PixelCoord& pixel,
                                             double h_c) {
  const Intrinsics& k = cam.intrinsics;
  const Vec3 d_cam((pixel.u - k.cx) / k.fx, (pixel.v - k.cy) / k.fy, 1.0);
  const Vec3 d_world = cam.pose.rotation * d_cam;
  // For a level camera fy * d_world.y == v - cy exactly.
  if (k.fy * d_world.y() <= kHorizonEps) return std::nullopt;
  const double t = h_c / d_world.y();  // plane is h_c below the center
  const Vec3 p_cam = t * d_cam;
  return GroundHit{CamPoint{p_cam}, p_cam.norm()};
}

// Point at distance D_0 along the pixel's viewing ray (sphere about the
// optical center): with d = ||((u-cx)/fx, (v-cy)/fy, 1)||, the camera-frame
// point is D_0/d * ((u-cx)/fx, (v-cy)/fy, 1).
inline CamPoint sphere_point(const Camera& cam, const PixelCoord& pixel, double d0) {
  const Intrinsics& k = cam.intrinsics;
  const Vec3 d_cam((pixel.u - k.cx) / k.fx, (pixel.v - k.cy) / k.fy, 1.0);
  return CamPoint{(d0 / d_cam.norm()) * d_cam};
}

// Ground branch when the ground intersection exists and is nearer than
// D_0; sphere branch otherwise. The two branches agree where D-hat == D_0.
inline CamPoint assumed_point(const Camera& cam, const PixelCoord& pixel,
                              const DepthAssumption& assumption) {
  if (auto hit = ground_point(cam, pixel, assumption.camera_height);
      hit && hit->distance < assumption.distance_threshold)
    return hit->point;
  return sphere_point(cam, pixel, assumption.distance_threshold);
}

// Source-image pixel that observes the same assumed 3D point as the given
// virtual pixel. Empty when the point is behind the source camera or
// projects outside its image.
inline std::optional<PixelCoord> correspond(const Camera& virtual_cam, const Camera& source_cam,
                                            const PixelCoord& pixel,
                                            const DepthAssumption& assumption) {
  const CamPoint p = assumed_point(virtual_cam, pixel, assumption);
  const WorldPoint p_w{virtual_cam.pose.world_from_camera(p.v)};
  auto pr = project(source_cam, p_w);
  if (!pr) return std::nullopt;
  return pr->pixel;
}

// Blend weight of a source camera for a virtual pixel: the clamped cosine
// between the pixel's world-frame viewing ray and the source optical axis,
// raised to `exponent`. Purely angular; coverage gating (zero weight where
// correspond() is empty) happens in build_warp_map.
inline double blend_weight(const Camera& virtual_cam, const Camera& source_cam,
                           const PixelCoord& pixel,
                           double exponent = kDefaultWeightExponent) {
  const Ray ray = unproject_ray(virtual_cam, pixel);
  const double c = ray.direction.dot(source_cam.optical_axis());
  return c <= 0.0 ? 0.0 : std::pow(c, exponent);
}

struct WarpEntry {
  uint16_t camera = 0;   // index into the source rig
  PixelCoord source;      // sample location in that camera's image
  double weight = 0.0;    // > 0 for stored entries
};

// Per-virtual-pixel correspondence table, stored CSR-style: entries of
// pixel (x, y) are entries[offsets[y*width+x] .. offsets[y*width+x+1]).
struct WarpMap {
  int width = 0;
  int height = 0;
  uint16_t camera_count = 0;
  std::vector<uint32_t> offsets;  // size width*height + 1
  std::vector<WarpEntry> entries;

  size_t begin_of(int x, int y) const { return offsets[static_cast<size_t>(y) * width + x]; }
  size_t end_of(int x, int y) const { return offsets[static_cast<size_t>(y) * width + x + 1]; }
  // Total blend weight W at a pixel; 0 means the pixel is uncovered.
  double total_weight(int x, int y) const {
    double w = 0.0;
    for (size_t i = begin_of(x, y); i < end_of(x, y); ++i) w += entries[i].weight;
    return w;
  }
};

// Builds the correspondence of every virtual pixel (sampled at its center)
// against every source camera. Pixels end up with one entry per source
// camera that sees their assumed point with positive blend weight.
inline WarpMap build_warp_map(const Camera& virtual_cam, const Rig& source_rig,
                              const DepthAssumption& assumption,
                              double weight_exponent = kDefaultWeightExponent) {
  virtual_cam.validate();
  source_rig.validate();
  assumption.validate();
  if (source_rig.cameras.size() > UINT16_MAX)
    throw std::invalid_argument("build_warp_map: too many source cameras");

  WarpMap map;
  map.width = virtual_cam.intrinsics.width;
  map.height = virtual_cam.intrinsics.height;
  map.camera_count = static_cast<uint16_t>(source_rig.cameras.size());
  map.offsets.reserve(static_cast<size_t>(map.width) * map.height + 1);
  map.offsets.push_back(0);

  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const PixelCoord pixel{x + 0.5, y + 0.5};
      const CamPoint p = assumed_point(virtual_cam, pixel, assumption);
      const WorldPoint p_w{virtual_cam.pose.world_from_camera(p.v)};
      for (uint16_t j = 0; j < map.camera_count; ++j) {
        const Camera& src = source_rig.cameras[j];
        auto pr = project(src, p_w);
        if (!pr) continue;
        const double w = blend_weight(virtual_cam, src, pixel, weight_exponent);
        if (w > 0.0) map.entries.push_back({j, pr->pixel, w});
      }
      map.offsets.push_back(static_cast<uint32_t>(map.entries.size()));
    }
  }
  return map;
}

// Blends source images through a warp map: output pixel = (1/W) sum of
// w_j * sample(I_j). Pixels with no entries are black and masked invalid.
inline ImageBuffer warp_and_blend(const WarpMap& map, const std::vector<ImageBuffer>& sources,
                                  Sampling mode = Sampling::Bilinear) {
  if (sources.size() != map.camera_count)
    throw std::invalid_argument("warp_and_blend: source image count does not match warp map");

  ImageBuffer out(map.width, map.height, 0, 0);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const size_t b = map.begin_of(x, y);
      const size_t e = map.end_of(x, y);
      if (b == e) continue;  // uncovered: stays black, mask invalid
      double acc[3] = {0.0, 0.0, 0.0};
      double total = 0.0;
      for (size_t i = b; i < e; ++i) {
        const WarpEntry& entry = map.entries[i];
        const ImageBuffer& img = sources[entry.camera];
        if (!(entry.source.u >= 0.0 && entry.source.u < img.width && entry.source.v >= 0.0 &&
              entry.source.v < img.height))
          throw std::invalid_argument(
              "warp_and_blend: source image size does not match the rig the map was built for");
        for (int c = 0; c < 3; ++c)
          acc[c] += entry.weight * sample(img, entry.source.u, entry.source.v, c, mode);
        total += entry.weight;
      }
      for (int c = 0; c < 3; ++c) {
        const double v = acc[c] / total;
        out.set(x, y, c, static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L)));
      }
      out.set_valid(x, y, true);
    }
  }
  return out;
}

// --- warp map binary serialization (little-endian) ---
//
// Layout:
//   magic   4 bytes  "VWM1"
//   version u32      1
//   width   u32      virtual image width
//   height  u32      virtual image height
//   cameras u16      source camera count
//   then width*height pixels in row-major order, each:
//     count u16
//     count entries of: camera u16, u f32, v f32, weight f32

namespace detail {

inline void put_u16(std::string& buf, uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}
inline void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f32(std::string& buf, float v) {
  uint32_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(buf, bits);
}

class ByteReader {
 public:
  ByteReader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  uint16_t u16() {
    need(2);
    const uint16_t v = static_cast<uint16_t>(byte(0) | (byte(1) << 8));
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte(i)) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() {
    const uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  bool exhausted() const { return pos_ == data_.size(); }

 private:
  uint32_t byte(size_t i) const { return static_cast<uint8_t>(data_[pos_ + i]); }
  void need(size_t n) const {
    if (pos_ + n > data_.size()) throw ParseError(path_ + ": truncated warp map");
  }
  const std::string& data_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace detail

inline constexpr char kWarpMagic[4] = {'V', 'W', 'M', '1'};
inline constexpr uint32_t kWarpVersion = 1;

inline void save_warp_map(const std::string& path, const WarpMap& map) {
  std::string buf;
  buf.reserve(15 + map.entries.size() * 14 + map.offsets.size() * 2);
  buf.append(kWarpMagic, 4);
  detail::put_u32(buf, kWarpVersion);
  detail::put_u32(buf, static_cast<uint32_t>(map.width));
  detail::put_u32(buf, static_cast<uint32_t>(map.height));
  detail::put_u16(buf, map.camera_count);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const size_t b = map.begin_of(x, y);
      const size_t e = map.end_of(x, y);
      detail::put_u16(buf, static_cast<uint16_t>(e - b));
      for (size_t i = b; i < e; ++i) {
        const WarpEntry& entry = map.entries[i];
        detail::put_u16(buf, entry.camera);
        detail::put_f32(buf, static_cast<float>(entry.source.u));
        detail::put_f32(buf, static_cast<float>(entry.source.v));
        detail::put_f32(buf, static_cast<float>(entry.weight));
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write warp map '" + path + "'");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for warp map '" + path + "'");
}

inline WarpMap load_warp_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open warp map '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  detail::ByteReader r(data, path);
  if (data.size() < 4 || std::memcmp(data.data(), kWarpMagic, 4) != 0)
    throw ParseError(path + ": not a warp map file");
  r.u32();  // skip magic
  if (r.u32() != kWarpVersion) throw ParseError(path + ": unsupported warp map version");
  WarpMap map;
  map.width = static_cast<int>(r.u32());
  map.height = static_cast<int>(r.u32());
  map.camera_count = r.u16();
  if (map.width < 1 || map.height < 1 || map.width > 1 << 16 || map.height > 1 << 16)
    throw ParseError(path + ": unreasonable warp map dimensions");
  const size_t n = static_cast<size_t>(map.width) * map.height;
  map.offsets.reserve(n + 1);
  map.offsets.push_back(0);
  for (size_t p = 0; p < n; ++p) {
    const uint16_t count = r.u16();
    for (uint16_t i = 0; i < count; ++i) {
      WarpEntry entry;
      entry.camera = r.u16();
      if (entry.camera >= map.camera_count)
        throw ParseError(path + ": warp entry references a camera beyond the count");
      entry.source.u = r.f32();
      entry.source.v = r.f32();
      entry.weight = r.f32();
      map.entries.push_back(entry);
    }
    map.offsets.push_back(static_cast<uint32_t>(map.entries.size()));
  }
  if (!r.exhausted()) throw ParseError(path + ": trailing bytes after warp map");
  return map;
}

}  // namespace vrig
