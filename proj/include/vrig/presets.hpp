#pragma once

// Built-in surround-view rig presets.
//
// Eight layouts spanning 4 to 8 cameras, all 1600x900, all mounted 1.6 m
// above ground with zero pitch/roll. Cameras sit on an ellipse around the
// vehicle roof (half-width 0.8 m, half-length 2.0 m) at the same bearing
// they point in, except the "compact cluster" variant which packs them on
// a 0.3 m circle pushed 0.5 m forward. The last preset mirrors a common
// production layout: five 70-degree cameras plus one 110-degree rear
// camera at irregular bearings. Positions are plausible roof placements,
// not measurements of any particular vehicle.

#include <string>
#include <vector>

#include "vrig/geometry.hpp"

namespace vrig {

namespace detail {

inline Camera preset_camera(const std::string& name, double fov_deg, double yaw_rad,
                            double ring_x, double ring_z, double forward_shift = 0.0) {
  Camera cam;
  cam.name = name;
  cam.intrinsics = intrinsics_from_fov(fov_deg, 1600, 900);
  const Vec3 position(ring_x * std::sin(yaw_rad), -1.6,
                      forward_shift + ring_z * std::cos(yaw_rad));
  cam.pose = Pose::from_yaw_pitch_roll(yaw_rad, 0.0, 0.0, position);
  return cam;
}

// K cameras evenly spaced over 360 degrees, camera 0 facing forward.
inline Rig ring_rig(const std::string& label, int count, double fov_deg, double ring_x = 0.8,
                    double ring_z = 2.0, double forward_shift = 0.0) {
  Rig rig;
  rig.label = label;
  for (int k = 0; k < count; ++k) {
    const double yaw = 2.0 * std::numbers::pi * k / count;
    rig.cameras.push_back(preset_camera("cam" + std::to_string(k), fov_deg, yaw, ring_x, ring_z,
                                        forward_shift));
  }
  return rig;
}

}  // namespace detail

// The eight presets, in a fixed order. Camera counts: 4,5,6,6,6,6,8,6.
inline std::vector<Rig> preset_rigs() {
  std::vector<Rig> rigs;
  rigs.push_back(detail::ring_rig("ring_4x95", 4, 95.0));
  rigs.push_back(detail::ring_rig("ring_5x75", 5, 75.0));
  rigs.push_back(detail::ring_rig("ring_6x80_wide", 6, 80.0));
  rigs.push_back(detail::ring_rig("cluster_6x80", 6, 80.0, 0.3, 0.3, 0.5));
  rigs.push_back(detail::ring_rig("ring_6x70", 6, 70.0));
  rigs.push_back(detail::ring_rig("ring_6x60", 6, 60.0));
  rigs.push_back(detail::ring_rig("ring_8x50", 8, 50.0));

  // Five 70-degree cameras plus a 110-degree rear camera.
  Rig mixed;
  mixed.label = "mixed_5x70_1x110";
  const struct {
    const char* name;
    double fov;
    double yaw_deg;
  } layout[] = {
      {"front", 70.0, 0.0},         {"front_right", 70.0, 55.0},  {"back_right", 70.0, 110.0},
      {"back", 110.0, 180.0},       {"back_left", 70.0, -110.0},  {"front_left", 70.0, -55.0},
  };
  for (const auto& c : layout)
    mixed.cameras.push_back(detail::preset_camera(c.name, c.fov, deg_to_rad(c.yaw_deg), 0.8, 2.0));
  rigs.push_back(mixed);
  return rigs;
}

}  // namespace vrig
