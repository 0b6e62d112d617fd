#pragma once

// Distance-weighted angular projection error between warped and direct
// projections of 3D box corners, and its aggregation over scenes and rig
// families.
//
// For a corner visible in a source camera, the warped observation is
// produced by the exact inverse of the warp: cast the source pixel's world
// ray and intersect it with the assumed surface (ground plane if that
// intersection lies nearer than D_0 from the virtual center, else the
// D_0-sphere about the virtual center), then project the surface point into
// the virtual camera. The direct observation projects the corner into the
// virtual camera without any depth assumption. Both are reduced to a pitch
// angle theta = atan((v - cy)/fy) and a yaw angle phi = atan((u - cx)/fx),
// and the error is D * (|dtheta| + |dphi|) in radian-meters, where D is
// the corner's distance to the virtual optical center (switchable to the
// source center; the two conventions disagree in general).

#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "vrig/boxes.hpp"
#include "vrig/geometry.hpp"
#include "vrig/text.hpp"
#include "vrig/warp.hpp"

namespace vrig {

struct AngleObservation {
  double theta = 0.0;  // pitch, radians
  double phi = 0.0;    // yaw, radians
};

// Which optical center the distance weight D is measured from.
enum class DistanceRef { VirtualCenter, SourceCenter };

struct MetricOptions {
  DistanceRef distance_ref = DistanceRef::VirtualCenter;
};

inline AngleObservation angles_from_pixel(const PixelCoord& pixel, const Intrinsics& k) {
  return {std::atan((pixel.v - k.cy) / k.fy), std::atan((pixel.u - k.cx) / k.fx)};
}

// Angles of the corner as seen directly by the virtual camera (no bounds
// check: the direct ray may leave the image and still carries angles).
inline std::optional<AngleObservation> direct_angles(const WorldPoint& corner,
                                                     const Camera& virtual_cam) {
  auto pr = project_unbounded(virtual_cam, corner);
  if (!pr) return std::nullopt;
  return angles_from_pixel(pr->pixel, virtual_cam.intrinsics);
}

// Angles of the corner after the warp round trip through a source camera.
// Empty when the corner is invisible to the source camera, the source ray
// misses the assumed surface, or the warped pixel leaves the virtual image.
inline std::optional<AngleObservation> warped_angles(const WorldPoint& corner,
                                                     const Camera& source_cam,
                                                     const Camera& virtual_cam,
                                                     const DepthAssumption& assumption) {
  auto src = project(source_cam, corner);  // full visibility check
  if (!src) return std::nullopt;

  const Ray ray = unproject_ray(source_cam, src->pixel);
  const Vec3 virt_center = virtual_cam.center();

  // Ground plane of the assumption: h_c below the virtual camera center.
  std::optional<Vec3> surface;
  const double plane_y = virt_center.y() + assumption.camera_height;
  if (ray.direction.y() > 1e-12) {
    const double t = (plane_y - ray.origin.y()) / ray.direction.y();
    if (t > 0.0) {
      const Vec3 hit = ray.origin + t * ray.direction;
      if ((hit - virt_center).norm() < assumption.distance_threshold) surface = hit;
    }
  }
  if (!surface) {
    // Sphere of radius D_0 about the virtual center: smallest t > 0 of
    // ||o + t d - c||^2 = D_0^2 with unit d.
    const Vec3 oc = ray.origin - virt_center;
    const double b = 2.0 * ray.direction.dot(oc);
    const double c = oc.squaredNorm() -
                     assumption.distance_threshold * assumption.distance_threshold;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / 2.0;
    const double t1 = (-b + sq) / 2.0;
    const double t = t0 > 0.0 ? t0 : t1;
    if (!(t > 0.0)) return std::nullopt;
    surface = ray.origin + t * ray.direction;
  }

  auto virt = project(virtual_cam, WorldPoint{*surface});  // inside virtual image required
  if (!virt) return std::nullopt;
  return angles_from_pixel(virt->pixel, virtual_cam.intrinsics);
}

// Distance-weighted angular error of one (corner, source, virtual) triple.
inline std::optional<double> corner_error(const WorldPoint& corner, const Camera& source_cam,
                                          const Camera& virtual_cam,
                                          const DepthAssumption& assumption,
                                          const MetricOptions& opts = {}) {
  auto warped = warped_angles(corner, source_cam, virtual_cam, assumption);
  if (!warped) return std::nullopt;
  auto direct = direct_angles(corner, virtual_cam);
  if (!direct) return std::nullopt;
  const Vec3 ref = opts.distance_ref == DistanceRef::VirtualCenter ? virtual_cam.center()
                                                                   : source_cam.center();
  const double dist = (corner.v - ref).norm();
  return dist * (std::abs(warped->theta - direct->theta) + std::abs(warped->phi - direct->phi));
}

struct ErrorReport {
  // per_corner[n][m]: summed contributions of box n's corner m over all
  // (source camera, virtual camera) pairs that observed it.
  std::vector<std::array<double, 8>> per_corner;
  std::vector<double> per_box;
  double total = 0.0;
  int64_t counted = 0;  // (corner, source, virtual) triples that contributed
  int64_t skipped = 0;  // triples with no observation

  void write(std::ostream& out) const {
    out << "total " << format_double(total) << "\n";
    out << "counted " << format_int(counted) << "\n";
    out << "skipped " << format_int(skipped) << "\n";
    for (size_t n = 0; n < per_box.size(); ++n)
      out << "box_" << format_uint(n) << " " << format_double(per_box[n]) << "\n";
  }
};

// Sums corner_error over all (box, corner, source camera, virtual camera)
// combinations of the scene, in that fixed nesting order.
inline ErrorReport scene_error(const Rig& virtual_rig, const Rig& source_rig, const Scene& scene,
                               const DepthAssumption& assumption,
                               const MetricOptions& opts = {}) {
  virtual_rig.validate();
  source_rig.validate();
  assumption.validate();

  ErrorReport report;
  report.per_corner.reserve(scene.boxes.size());
  report.per_box.reserve(scene.boxes.size());
  for (const Box3& box : scene.boxes) {
    const auto corners = box_corners(box);
    std::array<double, 8> corner_sums{};
    double box_sum = 0.0;
    for (int m = 0; m < 8; ++m) {
      for (const Camera& src : source_rig.cameras) {
        for (const Camera& virt : virtual_rig.cameras) {
          auto e = corner_error(corners[m], src, virt, assumption, opts);
          if (e) {
            corner_sums[m] += *e;
            ++report.counted;
          } else {
            ++report.skipped;
          }
        }
      }
      box_sum += corner_sums[m];
    }
    report.per_corner.push_back(corner_sums);
    report.per_box.push_back(box_sum);
    report.total += box_sum;
  }
  return report;
}

// The S camera systems that must share one virtual rig.
struct RigFamily {
  std::vector<Rig> rigs;

  void validate() const {
    if (rigs.empty()) throw std::invalid_argument("rig family: must contain at least one rig");
    for (const Rig& r : rigs) r.validate();
  }
};

// Total error of a candidate virtual rig across all systems and scenes,
// accumulated rig-major then scene-minor.
inline double total_error(const RigFamily& family, const std::vector<Scene>& scenes,
                          const Rig& virtual_rig, const DepthAssumption& assumption,
                          const MetricOptions& opts = {}) {
  family.validate();
  double total = 0.0;
  for (const Rig& rig : family.rigs)
    for (const Scene& scene : scenes)
      total += scene_error(virtual_rig, rig, scene, assumption, opts).total;
  return total;
}

}  // namespace vrig
