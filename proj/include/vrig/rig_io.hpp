#pragma once

// Rig config text format: reading and writing camera rigs.
//
// Format, line-oriented:
//
//   # comment (blank lines ignored)
//   rig <label>
//   camera <name>
//   fov_deg <degrees>        horizontal field of view, square pixels
//   width <pixels>
//   height <pixels>
//   x <meters>               optical-center position, world frame
//   y <meters>               (y is down; a camera 1.6 m up has y -1.6)
//   z <meters>
//   yaw <degrees>            applied yaw -> pitch -> roll, intrinsic
//   pitch <degrees>
//   roll <degrees>
//   camera <name2>
//   ...
//
// One `rig` line, then one block of the nine keys per `camera` line, each
// key exactly once per camera. Unknown keys are rejected.

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vrig/errors.hpp"
#include "vrig/geometry.hpp"
#include "vrig/text.hpp"

namespace vrig {

namespace detail {

inline const std::array<std::string, 9> kCameraKeys = {
    "fov_deg", "width", "height", "x", "y", "z", "yaw", "pitch", "roll"};

inline Camera camera_from_fields(const std::string& name,
                                 const std::map<std::string, double>& fields) {
  for (const std::string& key : kCameraKeys)
    if (!fields.count(key))
      throw ParseError("rig config: camera '" + name + "' is missing key '" + key + "'");
  Camera cam;
  cam.name = name;
  cam.intrinsics = intrinsics_from_fov(fields.at("fov_deg"),
                                       static_cast<int>(fields.at("width")),
                                       static_cast<int>(fields.at("height")));
  cam.pose = Pose::from_yaw_pitch_roll(
      deg_to_rad(fields.at("yaw")), deg_to_rad(fields.at("pitch")),
      deg_to_rad(fields.at("roll")), Vec3(fields.at("x"), fields.at("y"), fields.at("z")));
  return cam;
}

}  // namespace detail

inline Rig parse_rig_config(std::istream& in) {
  Rig rig;
  std::string line;
  bool have_rig_line = false;
  bool in_camera = false;
  std::string cam_name;
  std::map<std::string, double> fields;
  int line_no = 0;

  auto flush_camera = [&] {
    if (!in_camera) return;
    rig.cameras.push_back(detail::camera_from_fields(cam_name, fields));
    fields.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    const std::string where = "rig config line " + format_int(line_no);

    if (key == "rig") {
      if (have_rig_line) throw ParseError(where + ": duplicate 'rig' line");
      if (in_camera) throw ParseError(where + ": 'rig' must precede cameras");
      if (!(ls >> rig.label)) throw ParseError(where + ": 'rig' needs a label");
      have_rig_line = true;
    } else if (key == "camera") {
      flush_camera();
      if (!(ls >> cam_name)) throw ParseError(where + ": 'camera' needs a name");
      in_camera = true;
    } else {
      bool known = false;
      for (const std::string& k : detail::kCameraKeys) known = known || k == key;
      if (!known) throw ParseError(where + ": unknown key '" + key + "'");
      if (!in_camera) throw ParseError(where + ": '" + key + "' outside a camera block");
      if (fields.count(key)) throw ParseError(where + ": duplicate key '" + key + "'");
      std::string value;
      if (!(ls >> value)) throw ParseError(where + ": '" + key + "' needs a value");
      std::string extra;
      if (ls >> extra) throw ParseError(where + ": trailing content after '" + key + "'");
      fields[key] = parse_double(value, where);
    }
  }
  flush_camera();
  if (rig.cameras.empty()) throw ParseError("rig config: no cameras defined");
  rig.validate();
  return rig;
}

inline Rig load_rig_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rig config '" + path + "'");
  try {
    return parse_rig_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_rig_config(std::ostream& out, const Rig& rig) {
  out << "rig " << (rig.label.empty() ? "unnamed" : rig.label) << "\n";
  for (const Camera& cam : rig.cameras) {
    const auto [yaw, pitch, roll] = yaw_pitch_roll(cam.pose.rotation);
    out << "camera " << cam.name << "\n"
        << "fov_deg " << format_double(fov_deg_from_intrinsics(cam.intrinsics)) << "\n"
        << "width " << format_int(cam.intrinsics.width) << "\n"
        << "height " << format_int(cam.intrinsics.height) << "\n"
        << "x " << format_double(cam.pose.translation.x()) << "\n"
        << "y " << format_double(cam.pose.translation.y()) << "\n"
        << "z " << format_double(cam.pose.translation.z()) << "\n"
        << "yaw " << format_double(rad_to_deg(yaw)) << "\n"
        << "pitch " << format_double(rad_to_deg(pitch)) << "\n"
        << "roll " << format_double(rad_to_deg(roll)) << "\n";
  }
}

inline void save_rig_config(const std::string& path, const Rig& rig) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw IoError("cannot write rig config '" + path + "'");
  write_rig_config(out, rig);
  if (!out) throw IoError("write failed for rig config '" + path + "'");
}

}  // namespace vrig
