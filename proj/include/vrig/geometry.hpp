#pragma once

// Pinhole camera models, rigid poses, and pixel/camera/world projections.
//
// Frame conventions used throughout the library:
//   * camera frame: X right, Y down, Z forward (optical axis)
//   * world frame:  same axis orientation; the ground plane is y = 0 and
//     "up" is -Y, so a camera mounted h meters above ground has
//     translation.y() == -h
//   * poses are stored camera-to-world; the 4x4 homogeneous form is
//     materialized on demand
//   * integer pixel (i, j) samples at continuous coordinate (i+0.5, j+0.5)

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vrig {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Points behind or closer than this camera-frame depth never project.
inline constexpr double kZMin = 1e-3;

inline constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}
inline constexpr double rad_to_deg(double rad) {
  return rad * 180.0 / std::numbers::pi;
}

// A 3D point expressed in the world frame.
struct WorldPoint {
  Vec3 v;
};

// A 3D point expressed in some camera's frame; which camera is determined
// by the operation that produced or consumes it.
struct CamPoint {
  Vec3 v;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
      throw std::invalid_argument("intrinsics: focal lengths must be positive");
    if (width < 1 || height < 1)
      throw std::invalid_argument("intrinsics: image size must be at least 1x1");
    if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height))
      throw std::invalid_argument("intrinsics: principal point must lie inside the image");
  }
};

// Square-pixel intrinsics from a horizontal field of view.
inline Intrinsics intrinsics_from_fov(double fov_deg, int width, int height) {
  if (!(fov_deg > 0.0) || !(fov_deg < 180.0))
    throw std::invalid_argument("intrinsics_from_fov: fov must be in (0, 180) degrees");
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = (width / 2.0) / std::tan(deg_to_rad(fov_deg) / 2.0);
  k.fy = k.fx;
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  k.validate();
  return k;
}

// Horizontal field of view implied by square-pixel intrinsics, in degrees.
inline double fov_deg_from_intrinsics(const Intrinsics& k) {
  return rad_to_deg(2.0 * std::atan((k.width / 2.0) / k.fx));
}

// Rigid camera-to-world transform: p_world = rotation * p_cam + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }

  // Intrinsic yaw -> pitch -> roll: yaw about +Y (down), pitch about the new
  // +X, roll about the new +Z. Positive yaw turns the optical axis toward +X
  // (rightward); positive pitch tilts it upward (toward -Y).
  static Pose from_yaw_pitch_roll(double yaw, double pitch, double roll,
                                  const Vec3& translation = Vec3::Zero()) {
    Mat3 r = (Eigen::AngleAxisd(yaw, Vec3::UnitY()) *
              Eigen::AngleAxisd(pitch, Vec3::UnitX()) *
              Eigen::AngleAxisd(roll, Vec3::UnitZ()))
                 .toRotationMatrix();
    return Pose{r, translation};
  }

  void validate() const {
    if (((rotation.transpose() * rotation) - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("pose: rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-9)
      throw std::invalid_argument("pose: rotation determinant is not +1");
    if (!translation.allFinite())
      throw std::invalid_argument("pose: translation is not finite");
  }

  Vec3 world_from_camera(const Vec3& p_cam) const { return rotation * p_cam + translation; }
  Vec3 camera_from_world(const Vec3& p_world) const {
    return rotation.transpose() * (p_world - translation);
  }

  Pose inverse() const { return Pose{rotation.transpose(), -(rotation.transpose() * translation)}; }

  Pose operator*(const Pose& other) const {
    return Pose{rotation * other.rotation, rotation * other.translation + translation};
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }
};

// Recovers the (yaw, pitch, roll) angles of Pose::from_yaw_pitch_roll.
// Falls back to roll = 0 at the pitch = +/-90 degree singularity.
inline std::array<double, 3> yaw_pitch_roll(const Mat3& r) {
  const double sin_pitch = -r(1, 2);
  if (std::abs(sin_pitch) > 1.0 - 1e-12) {
    const double pitch = std::copysign(std::numbers::pi / 2.0, sin_pitch);
    return {std::atan2(-r(2, 0), r(0, 0)), pitch, 0.0};
  }
  return {std::atan2(r(0, 2), r(2, 2)), std::asin(sin_pitch), std::atan2(r(1, 0), r(1, 1))};
}

struct Camera {
  Intrinsics intrinsics;
  Pose pose;
  std::string name;

  Vec3 center() const { return pose.translation; }
  Vec3 optical_axis() const { return pose.rotation * Vec3::UnitZ(); }
  // Height of the optical center above the ground plane y = 0.
  double height_above_ground() const { return -pose.translation.y(); }

  void validate() const {
    intrinsics.validate();
    pose.validate();
  }
};

struct Rig {
  std::string label;
  std::vector<Camera> cameras;

  void validate() const {
    if (cameras.empty()) throw std::invalid_argument("rig: must contain at least one camera");
    for (const Camera& c : cameras) c.validate();
  }
};

struct Projection {
  PixelCoord pixel;
  double depth = 0.0;  // camera-frame Z in meters
};

inline bool pixel_in_bounds(const PixelCoord& p, const Intrinsics& k) {
  return p.u >= 0.0 && p.u < k.width && p.v >= 0.0 && p.v < k.height;
}

// Projects a world point, requiring only that it lies in front of the camera.
inline std::optional<Projection> project_unbounded(const Camera& cam, const WorldPoint& p) {
  const Vec3 pc = cam.pose.camera_from_world(p.v);
  if (!(pc.z() > kZMin)) return std::nullopt;
  const Intrinsics& k = cam.intrinsics;
  return Projection{{k.fx * pc.x() / pc.z() + k.cx, k.fy * pc.y() / pc.z() + k.cy}, pc.z()};
}

// Projects a world point; empty when behind the near plane or outside the image.
inline std::optional<Projection> project(const Camera& cam, const WorldPoint& p) {
  auto pr = project_unbounded(cam, p);
  if (!pr || !pixel_in_bounds(pr->pixel, cam.intrinsics)) return std::nullopt;
  return pr;
}

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

// World-frame viewing ray through a pixel; origin is the optical center.
inline Ray unproject_ray(const Camera& cam, const PixelCoord& pixel) {
  const Intrinsics& k = cam.intrinsics;
  const Vec3 d_cam((pixel.u - k.cx) / k.fx, (pixel.v - k.cy) / k.fy, 1.0);
  return Ray{cam.pose.translation, (cam.pose.rotation * d_cam).normalized()};
}

}  // namespace vrig
