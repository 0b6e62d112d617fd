#pragma once

// 3D bounding boxes, scenes of boxes, and their line-oriented text format.
//
// Box frame: length along local x, width along local z, height along the
// vertical y axis (world y is down, so the roof of a grounded box has the
// most negative y). Yaw rotates about the vertical axis, matching camera
// yaw.
//
// Scene file format:
//
//   # comment
//   seed <u64>
//   label <string>
//   box <class> <cx> <cy> <cz> <length> <width> <height> <yaw_rad>

#include <array>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vrig/errors.hpp"
#include "vrig/geometry.hpp"
#include "vrig/text.hpp"

namespace vrig {

enum class BoxClass { Car, Bus, Truck, Pedestrian, Motorcycle, Bicycle };

inline constexpr std::array<BoxClass, 6> kAllBoxClasses = {
    BoxClass::Car,        BoxClass::Bus,        BoxClass::Truck,
    BoxClass::Pedestrian, BoxClass::Motorcycle, BoxClass::Bicycle};

inline std::string to_string(BoxClass c) {
  switch (c) {
    case BoxClass::Car: return "Car";
    case BoxClass::Bus: return "Bus";
    case BoxClass::Truck: return "Truck";
    case BoxClass::Pedestrian: return "Pedestrian";
    case BoxClass::Motorcycle: return "Motorcycle";
    case BoxClass::Bicycle: return "Bicycle";
  }
  throw std::invalid_argument("unknown box class");
}

inline BoxClass box_class_from_string(const std::string& s) {
  for (BoxClass c : kAllBoxClasses)
    if (to_string(c) == s) return c;
  throw ParseError("unknown box class '" + s + "'");
}

struct Box3 {
  Vec3 center = Vec3::Zero();  // world frame
  double length = 1.0;         // local x extent
  double width = 1.0;          // local z extent
  double height = 1.0;         // vertical (y) extent
  double yaw = 0.0;            // radians, in [-pi, pi)
  BoxClass class_label = BoxClass::Car;

  void validate() const {
    if (!(length > 0.0 && width > 0.0 && height > 0.0))
      throw std::invalid_argument("box: size components must be positive");
    if (!(yaw >= -std::numbers::pi && yaw < std::numbers::pi))
      throw std::invalid_argument("box: yaw must lie in [-pi, pi)");
    if (!center.allFinite()) throw std::invalid_argument("box: center must be finite");
  }
};

// The 8 corners in a fixed documented order: corner index m has sign bits
//   bit 0: + local x (length)   bit 1: + local z (width)   bit 2: + y
// so m = 0 is (-l/2, -h/2, -w/2) and m = 7 is (+l/2, +h/2, +w/2), each
// rotated by yaw about the vertical axis and offset by the center.
inline std::array<WorldPoint, 8> box_corners(const Box3& box) {
  box.validate();
  const Mat3 r = Eigen::AngleAxisd(box.yaw, Vec3::UnitY()).toRotationMatrix();
  std::array<WorldPoint, 8> corners;
  for (int m = 0; m < 8; ++m) {
    const double sx = (m & 1) ? 0.5 : -0.5;
    const double sz = (m & 2) ? 0.5 : -0.5;
    const double sy = (m & 4) ? 0.5 : -0.5;
    const Vec3 local(sx * box.length, sy * box.height, sz * box.width);
    corners[m] = WorldPoint{box.center + r * local};
  }
  return corners;
}

struct Scene {
  std::vector<Box3> boxes;
  uint64_t seed = 0;
  std::string label;
};

inline void write_scene(std::ostream& out, const Scene& scene) {
  out << "seed " << format_uint(scene.seed) << "\n";
  out << "label " << (scene.label.empty() ? "unnamed" : scene.label) << "\n";
  for (const Box3& b : scene.boxes) {
    out << "box " << to_string(b.class_label) << " " << format_double(b.center.x()) << " "
        << format_double(b.center.y()) << " " << format_double(b.center.z()) << " "
        << format_double(b.length) << " " << format_double(b.width) << " "
        << format_double(b.height) << " " << format_double(b.yaw) << "\n";
  }
}

inline std::string scene_to_string(const Scene& scene) {
  std::ostringstream out;
  write_scene(out, scene);
  return out.str();
}

inline Scene parse_scene(std::istream& in) {
  Scene scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    const std::string where = "scene line " + format_int(line_no);
    if (key == "seed") {
      std::string v;
      if (!(ls >> v)) throw ParseError(where + ": 'seed' needs a value");
      scene.seed = parse_uint(v, where);
    } else if (key == "label") {
      if (!(ls >> scene.label)) throw ParseError(where + ": 'label' needs a value");
    } else if (key == "box") {
      std::string cls;
      std::array<std::string, 7> num;
      if (!(ls >> cls >> num[0] >> num[1] >> num[2] >> num[3] >> num[4] >> num[5] >> num[6]))
        throw ParseError(where + ": 'box' needs class + 7 numbers");
      std::string extra;
      if (ls >> extra) throw ParseError(where + ": trailing content after box");
      Box3 b;
      b.class_label = box_class_from_string(cls);
      b.center = Vec3(parse_double(num[0], where), parse_double(num[1], where),
                      parse_double(num[2], where));
      b.length = parse_double(num[3], where);
      b.width = parse_double(num[4], where);
      b.height = parse_double(num[5], where);
      b.yaw = parse_double(num[6], where);
      b.validate();
      scene.boxes.push_back(b);
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  return scene;
}

inline Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene '" + path + "'");
  try {
    return parse_scene(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_scene(const std::string& path, const Scene& scene) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scene '" + path + "'");
  write_scene(out, scene);
  if (!out) throw IoError("write failed for scene '" + path + "'");
}

}  // namespace vrig
