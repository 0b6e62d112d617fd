#pragma once

// Flat parameter vectors describing a virtual rig, the decoding back to a
// Rig, and the objective adapter the optimizer minimizes.
//
// Two layouts are supported:
//   Tied (default): [x_0, y_0, z_0, ..., x_{K-1}, y_{K-1}, z_{K-1},
//                    base_yaw, fov] with n = 3K + 2. Camera k points at
//     base_yaw + 2 pi k / K and all cameras share one field of view.
//   PerCamera: [x, y, z, yaw, fov] per camera, n = 5K, every camera free.
// Angles are radians; positions are meters; pitch and roll are always 0
// and the resolution is fixed by the spec fields below. Coordinates are
// frozen by giving them equal lower and upper bounds.

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vrig/geometry.hpp"
#include "vrig/metric.hpp"
#include "vrig/text.hpp"

namespace vrig {

enum class ParamMode { Tied, PerCamera };

struct RigParamSpec {
  int camera_count = 6;
  ParamMode mode = ParamMode::Tied;
  int width = 1600;
  int height = 900;
  std::string label = "virtual";

  int dim() const { return mode == ParamMode::Tied ? 3 * camera_count + 2 : 5 * camera_count; }

  void validate() const {
    if (camera_count < 1)
      throw std::invalid_argument("rig params: camera count must be at least 1");
    if (width < 1 || height < 1)
      throw std::invalid_argument("rig params: resolution must be positive");
  }
};

// Decodes a parameter vector into a concrete virtual rig.
inline Rig rig_from_params(const RigParamSpec& spec, const Eigen::VectorXd& u) {
  spec.validate();
  if (u.size() != spec.dim())
    throw std::invalid_argument("rig params: vector size does not match the spec layout");

  Rig rig;
  rig.label = spec.label;
  rig.cameras.reserve(spec.camera_count);
  const int k_cams = spec.camera_count;
  for (int k = 0; k < k_cams; ++k) {
    double x, y, z, yaw, fov;
    if (spec.mode == ParamMode::Tied) {
      x = u[3 * k];
      y = u[3 * k + 1];
      z = u[3 * k + 2];
      yaw = u[3 * k_cams] + 2.0 * std::numbers::pi * k / k_cams;
      fov = u[3 * k_cams + 1];
    } else {
      x = u[5 * k];
      y = u[5 * k + 1];
      z = u[5 * k + 2];
      yaw = u[5 * k + 3];
      fov = u[5 * k + 4];
    }
    Camera cam;
    cam.name = "virt" + format_int(k);
    cam.intrinsics = intrinsics_from_fov(rad_to_deg(fov), spec.width, spec.height);
    cam.pose = Pose::from_yaw_pitch_roll(yaw, 0.0, 0.0, Vec3(x, y, z));
    rig.cameras.push_back(cam);
  }
  return rig;
}

struct ParamBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd grid_delta;
};

// Sensible search box for vehicle-roof cameras: positions within a few
// meters of the ego origin, height 1 m to 2.5 m above ground (y is down),
// free base yaw, FOV between 40 and 140 degrees. Grid: 0.1 m, 1 degree.
inline ParamBounds default_param_bounds(const RigParamSpec& spec) {
  spec.validate();
  const int n = spec.dim();
  ParamBounds b{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  auto set = [&](int i, double lo, double hi, double delta) {
    b.lower[i] = lo;
    b.upper[i] = hi;
    b.grid_delta[i] = delta;
  };
  const double yaw_span = std::numbers::pi;
  const double deg = deg_to_rad(1.0);
  for (int k = 0; k < spec.camera_count; ++k) {
    const int base = (spec.mode == ParamMode::Tied ? 3 : 5) * k;
    set(base + 0, -2.0, 2.0, 0.1);       // x
    set(base + 1, -2.5, -1.0, 0.1);      // y (negative = above ground)
    set(base + 2, -3.0, 3.0, 0.1);       // z
    if (spec.mode == ParamMode::PerCamera) {
      set(base + 3, -yaw_span, yaw_span, deg);
      set(base + 4, deg_to_rad(40.0), deg_to_rad(140.0), deg);
    }
  }
  if (spec.mode == ParamMode::Tied) {
    set(3 * spec.camera_count, -yaw_span, yaw_span, deg);
    set(3 * spec.camera_count + 1, deg_to_rad(40.0), deg_to_rad(140.0), deg);
  }
  return b;
}

// Objective for the optimizer: decode the candidate, evaluate the total
// projection error over the family and scenes. When hc_override is unset,
// h_c is taken from the first decoded camera's height above ground.
inline std::function<double(const Eigen::VectorXd&)> make_rig_objective(
    const RigFamily& family, const std::vector<Scene>& scenes, const RigParamSpec& spec,
    double d0, std::optional<double> hc_override = std::nullopt,
    const MetricOptions& opts = {}) {
  family.validate();
  spec.validate();
  if (scenes.empty()) throw std::invalid_argument("rig objective: at least one scene required");
  return [=](const Eigen::VectorXd& u) {  // owns copies of family and scenes
    const Rig rig = rig_from_params(spec, u);
    DepthAssumption assumption;
    assumption.distance_threshold = d0;
    assumption.camera_height =
        hc_override ? *hc_override : rig.cameras.front().height_above_ground();
    assumption.validate();
    return total_error(family, scenes, rig, assumption, opts);
  };
}

}  // namespace vrig
