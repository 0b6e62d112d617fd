#pragma once

// Independent reference implementations used only by the tests.
//
// Everything here is written deliberately "the straightforward way" —
// explicit homogeneous 4x4 matrices, literal textbook formulas, naive
// double loops — and shares no code paths with the library beyond the
// basic data types, so agreement between the two is meaningful.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vrig/boxes.hpp"
#include "vrig/geometry.hpp"
#include "vrig/warp.hpp"

namespace oracle {

using vrig::Camera;
using vrig::DepthAssumption;
using vrig::PixelCoord;
using vrig::Rig;

// 3x3 intrinsic matrix.
inline Eigen::Matrix3d k_matrix(const vrig::Intrinsics& k) {
  Eigen::Matrix3d m;
  m << k.fx, 0, k.cx, 0, k.fy, k.cy, 0, 0, 1;
  return m;
}

// Flat-ground back-projection evaluated literally: fixed (level-camera)
// formulas in the camera frame, no ray casting.
//   X = (fy (u-cx))/(fx (v-cy)) h,  Y = h,  Z = fy/(v-cy) h
inline std::optional<Eigen::Vector3d> flat_ground_point(const vrig::Intrinsics& k,
                                                        const PixelCoord& px, double h) {
  if (px.v - k.cy <= 1e-6) return std::nullopt;
  const double x = (k.fy * (px.u - k.cx)) / (k.fx * (px.v - k.cy)) * h;
  const double z = k.fy / (px.v - k.cy) * h;
  return Eigen::Vector3d(x, h, z);
}

// Fixed-distance point evaluated literally.
inline Eigen::Vector3d fixed_distance_point(const vrig::Intrinsics& k, const PixelCoord& px,
                                            double d0) {
  const double a = (px.u - k.cx) / k.fx;
  const double b = (px.v - k.cy) / k.fy;
  const double d = std::sqrt(a * a + b * b + 1.0);
  return Eigen::Vector3d(a * d0 / d, b * d0 / d, d0 / d);
}

// Pixel in camera 2 corresponding to a pixel in camera 1 when both share
// an optical center: the rotation homography K2 * R2^T * R1 * K1^{-1}.
inline std::optional<PixelCoord> rotation_homography(const Camera& cam1, const Camera& cam2,
                                                     const PixelCoord& px) {
  const Eigen::Matrix3d h = k_matrix(cam2.intrinsics) * cam2.pose.rotation.transpose() *
                            cam1.pose.rotation * k_matrix(cam1.intrinsics).inverse();
  const Eigen::Vector3d mapped = h * Eigen::Vector3d(px.u, px.v, 1.0);
  if (mapped.z() <= 0.0) return std::nullopt;
  return PixelCoord{mapped.x() / mapped.z(), mapped.y() / mapped.z()};
}

struct Entry {
  int camera;
  PixelCoord source;
  double weight;
};

// Naive per-pixel warp-map reference: literal branch rule in the virtual
// camera frame (level virtual cameras only), explicit 4x4 pose algebra,
// direct projection formulas, acos-based blend weight.
inline std::vector<std::vector<Entry>> naive_warp_entries(const Camera& virtual_cam,
                                                          const Rig& rig,
                                                          const DepthAssumption& assumption,
                                                          double exponent) {
  const vrig::Intrinsics& vk = virtual_cam.intrinsics;
  const Eigen::Matrix4d virt_to_world = virtual_cam.pose.matrix();
  std::vector<std::vector<Entry>> result(static_cast<size_t>(vk.width) * vk.height);

  for (int y = 0; y < vk.height; ++y) {
    for (int x = 0; x < vk.width; ++x) {
      const PixelCoord px{x + 0.5, y + 0.5};

      Eigen::Vector3d p_cam;
      const auto ground = flat_ground_point(vk, px, assumption.camera_height);
      if (ground && ground->norm() < assumption.distance_threshold)
        p_cam = *ground;
      else
        p_cam = fixed_distance_point(vk, px, assumption.distance_threshold);

      const Eigen::Vector4d p_world = virt_to_world * p_cam.homogeneous();

      for (size_t j = 0; j < rig.cameras.size(); ++j) {
        const Camera& src = rig.cameras[j];
        const Eigen::Vector4d p_src = src.pose.matrix().inverse() * p_world;
        if (!(p_src.z() > vrig::kZMin)) continue;
        const double u = src.intrinsics.fx * p_src.x() / p_src.z() + src.intrinsics.cx;
        const double v = src.intrinsics.fy * p_src.y() / p_src.z() + src.intrinsics.cy;
        if (!(u >= 0.0 && u < src.intrinsics.width && v >= 0.0 && v < src.intrinsics.height))
          continue;

        // Angle between the virtual pixel ray and the source optical axis.
        const Eigen::Vector3d dir_cam((px.u - vk.cx) / vk.fx, (px.v - vk.cy) / vk.fy, 1.0);
        const Eigen::Vector3d dir_world = virtual_cam.pose.rotation * dir_cam.normalized();
        const Eigen::Vector3d axis = src.pose.rotation * Eigen::Vector3d(0, 0, 1);
        const double angle = std::acos(std::clamp(dir_world.dot(axis), -1.0, 1.0));
        const double cosine = std::cos(angle);
        if (cosine <= 0.0) continue;
        const double weight = std::pow(cosine, exponent);
        if (weight > 0.0)
          result[static_cast<size_t>(y) * vk.width + x].push_back(
              {static_cast<int>(j), {u, v}, weight});
      }
    }
  }
  return result;
}

// Independent corner error: project into the source camera with explicit
// matrix algebra, intersect the assumed surface, re-project, take angle
// differences scaled by the corner's distance to the virtual center.
inline std::optional<double> corner_error(const Eigen::Vector3d& corner, const Camera& src,
                                          const Camera& virt, const DepthAssumption& assumption) {
  // Source projection (visibility required).
  const Eigen::Vector4d p_src = src.pose.matrix().inverse() * corner.homogeneous();
  if (!(p_src.z() > vrig::kZMin)) return std::nullopt;
  const double su = src.intrinsics.fx * p_src.x() / p_src.z() + src.intrinsics.cx;
  const double sv = src.intrinsics.fy * p_src.y() / p_src.z() + src.intrinsics.cy;
  if (!(su >= 0.0 && su < src.intrinsics.width && sv >= 0.0 && sv < src.intrinsics.height))
    return std::nullopt;

  // Cast the source pixel ray in the world frame.
  const Eigen::Vector3d dir_cam((su - src.intrinsics.cx) / src.intrinsics.fx,
                                (sv - src.intrinsics.cy) / src.intrinsics.fy, 1.0);
  const Eigen::Vector3d o = src.pose.translation;
  const Eigen::Vector3d d = (src.pose.rotation * dir_cam).normalized();
  const Eigen::Vector3d c_virt = virt.pose.translation;

  std::optional<Eigen::Vector3d> hit;
  if (d.y() > 1e-12) {
    const double t = (c_virt.y() + assumption.camera_height - o.y()) / d.y();
    if (t > 0.0) {
      const Eigen::Vector3d g = o + t * d;
      if ((g - c_virt).norm() < assumption.distance_threshold) hit = g;
    }
  }
  if (!hit) {
    const Eigen::Vector3d oc = o - c_virt;
    const double b = 2.0 * d.dot(oc);
    const double c = oc.squaredNorm() -
                     assumption.distance_threshold * assumption.distance_threshold;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return std::nullopt;
    double t = (-b - std::sqrt(disc)) / 2.0;
    if (t <= 0.0) t = (-b + std::sqrt(disc)) / 2.0;
    if (t <= 0.0) return std::nullopt;
    hit = o + t * d;
  }

  // Warped observation through the virtual camera (in-image required).
  const Eigen::Vector4d h_virt = virt.pose.matrix().inverse() * hit->homogeneous();
  if (!(h_virt.z() > vrig::kZMin)) return std::nullopt;
  const double wu = virt.intrinsics.fx * h_virt.x() / h_virt.z() + virt.intrinsics.cx;
  const double wv = virt.intrinsics.fy * h_virt.y() / h_virt.z() + virt.intrinsics.cy;
  if (!(wu >= 0.0 && wu < virt.intrinsics.width && wv >= 0.0 && wv < virt.intrinsics.height))
    return std::nullopt;

  // Direct observation (front-of-camera only).
  const Eigen::Vector4d c_direct = virt.pose.matrix().inverse() * corner.homogeneous();
  if (!(c_direct.z() > vrig::kZMin)) return std::nullopt;
  const double du = virt.intrinsics.fx * c_direct.x() / c_direct.z() + virt.intrinsics.cx;
  const double dv = virt.intrinsics.fy * c_direct.y() / c_direct.z() + virt.intrinsics.cy;

  const auto theta = [&](double v) { return std::atan((v - virt.intrinsics.cy) / virt.intrinsics.fy); };
  const auto phi = [&](double u) { return std::atan((u - virt.intrinsics.cx) / virt.intrinsics.fx); };
  const double dist = (corner - virt.pose.translation).norm();
  return dist * (std::abs(theta(wv) - theta(dv)) + std::abs(phi(wu) - phi(du)));
}

}  // namespace oracle
