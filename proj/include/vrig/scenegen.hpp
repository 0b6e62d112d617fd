#pragma once

// Seeded synthetic scene generation and a simple test-pattern renderer.
//
// Scenes place boxes uniformly in a polar annulus around the ego origin
// (uniform in angle and in radius), with class-dependent sizes and bottom
// faces resting on the ground plane y = 0. All sizes below are synthetic
// defaults, not measurements. The renderer draws a checkerboard ground,
// a flat sky, and flat-shaded convex box silhouettes painter-sorted by
// center distance; it exists to give the warp something recognizable to
// chew on, not to be pretty.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "vrig/boxes.hpp"
#include "vrig/geometry.hpp"
#include "vrig/image.hpp"
#include "vrig/random.hpp"

namespace vrig {

struct ClassSpec {
  BoxClass class_label = BoxClass::Car;
  double probability = 0.0;
  double length_min = 1.0, length_max = 1.0;
  double width_min = 1.0, width_max = 1.0;
  double height_min = 1.0, height_max = 1.0;
};

inline std::vector<ClassSpec> default_class_mix() {
  return {
      {BoxClass::Car, 0.50, 4.0, 5.0, 1.7, 2.0, 1.4, 1.6},
      {BoxClass::Bus, 0.05, 10.0, 12.0, 2.5, 2.9, 3.0, 3.5},
      {BoxClass::Truck, 0.10, 6.0, 10.0, 2.3, 2.6, 2.5, 3.5},
      {BoxClass::Pedestrian, 0.15, 0.5, 0.7, 0.5, 0.7, 1.5, 1.9},
      {BoxClass::Motorcycle, 0.10, 2.0, 2.3, 0.7, 0.9, 1.2, 1.5},
      {BoxClass::Bicycle, 0.10, 1.6, 1.9, 0.5, 0.7, 1.0, 1.4},
  };
}

struct SceneSpec {
  uint64_t seed = 0;
  int n_boxes = 0;
  double r_min = 5.0;
  double r_max = 40.0;
  std::vector<ClassSpec> class_mix = default_class_mix();
  std::string label = "scene";

  void validate() const {
    if (n_boxes < 0) throw std::invalid_argument("scene spec: negative box count");
    if (!(r_min > 0.0 && r_min < r_max))
      throw std::invalid_argument("scene spec: need 0 < r_min < r_max");
    double p = 0.0;
    for (const ClassSpec& c : class_mix) {
      if (!(c.probability >= 0.0)) throw std::invalid_argument("scene spec: negative probability");
      if (!(c.length_min > 0.0 && c.length_min <= c.length_max && c.width_min > 0.0 &&
            c.width_min <= c.width_max && c.height_min > 0.0 && c.height_min <= c.height_max))
        throw std::invalid_argument("scene spec: bad size range");
      p += c.probability;
    }
    if (std::abs(p - 1.0) > 1e-9)
      throw std::invalid_argument("scene spec: class probabilities must sum to 1");
  }
};

// Deterministic scene from a spec. Per box the draws are, in order:
// bearing, radius, yaw, class selector, length, width, height.
inline Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Scene scene;
  scene.seed = spec.seed;
  scene.label = spec.label;
  scene.boxes.reserve(spec.n_boxes);
  std::mt19937_64 rng(spec.seed);

  for (int i = 0; i < spec.n_boxes; ++i) {
    const double bearing = uniform_in(rng, 0.0, 2.0 * std::numbers::pi);
    const double radius = uniform_in(rng, spec.r_min, spec.r_max);
    const double yaw = uniform_in(rng, -std::numbers::pi, std::numbers::pi);
    const double selector = uniform01(rng);

    const ClassSpec* chosen = &spec.class_mix.back();
    double cumulative = 0.0;
    for (const ClassSpec& c : spec.class_mix) {
      cumulative += c.probability;
      if (selector < cumulative) {
        chosen = &c;
        break;
      }
    }

    Box3 box;
    box.class_label = chosen->class_label;
    box.length = uniform_in(rng, chosen->length_min, chosen->length_max);
    box.width = uniform_in(rng, chosen->width_min, chosen->width_max);
    box.height = uniform_in(rng, chosen->height_min, chosen->height_max);
    box.yaw = yaw;
    // bearing 0 is straight ahead (+z); grounded: bottom face at y = 0.
    box.center = Vec3(radius * std::sin(bearing), -box.height / 2.0, radius * std::cos(bearing));
    box.validate();
    scene.boxes.push_back(box);
  }
  return scene;
}

namespace detail {

inline std::array<uint8_t, 3> class_color(BoxClass c) {
  switch (c) {
    case BoxClass::Car: return {200, 60, 60};
    case BoxClass::Bus: return {230, 180, 40};
    case BoxClass::Truck: return {160, 95, 40};
    case BoxClass::Pedestrian: return {60, 180, 60};
    case BoxClass::Motorcycle: return {60, 60, 200};
    case BoxClass::Bicycle: return {180, 60, 200};
  }
  return {255, 255, 255};
}

// Convex hull (monotone chain) of 2D points, counter-clockwise.
inline std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> pts) {
  std::sort(pts.begin(), pts.end(), [](const PixelCoord& a, const PixelCoord& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  auto cross = [](const PixelCoord& o, const PixelCoord& a, const PixelCoord& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
  };
  std::vector<PixelCoord> hull(2 * pts.size());
  size_t k = 0;
  for (const PixelCoord& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  return hull;
}

inline bool inside_hull(const std::vector<PixelCoord>& hull, double u, double v) {
  if (hull.size() < 3) return false;
  for (size_t i = 0; i < hull.size(); ++i) {
    const PixelCoord& a = hull[i];
    const PixelCoord& b = hull[(i + 1) % hull.size()];
    if ((b.u - a.u) * (v - a.v) - (b.v - a.v) * (u - a.u) < 0.0) return false;
  }
  return true;
}

}  // namespace detail

// Rasterizes a checkerboard ground plane (1 m squares), a flat sky, and
// the scene's boxes as class-colored convex silhouettes, farther boxes
// first. Boxes with any corner at or behind the near plane are skipped
// (no polygon clipping here; the fixture scenes keep boxes well inside).
inline ImageBuffer render_test_pattern(const Camera& camera, const Scene& scene) {
  camera.validate();
  ImageBuffer img(camera.intrinsics.width, camera.intrinsics.height);

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Ray ray = unproject_ray(camera, {x + 0.5, y + 0.5});
      if (ray.direction.y() > 1e-12) {
        const double t = (0.0 - ray.origin.y()) / ray.direction.y();
        const Vec3 ground = ray.origin + t * ray.direction;
        const long par = static_cast<long>(std::floor(ground.x())) +
                         static_cast<long>(std::floor(ground.z()));
        const uint8_t g = (par % 2 + 2) % 2 == 0 ? 90 : 160;
        img.set_rgb(x, y, g, g, g);
      } else {
        img.set_rgb(x, y, 70, 120, 180);  // sky
      }
    }
  }

  std::vector<size_t> order(scene.boxes.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double da = (scene.boxes[a].center - camera.center()).norm();
    const double db = (scene.boxes[b].center - camera.center()).norm();
    return da != db ? da > db : a < b;  // farthest first
  });

  for (size_t idx : order) {
    const Box3& box = scene.boxes[idx];
    std::vector<PixelCoord> pts;
    pts.reserve(8);
    bool all_in_front = true;
    for (const WorldPoint& corner : box_corners(box)) {
      auto pr = project_unbounded(camera, corner);
      if (!pr) {
        all_in_front = false;
        break;
      }
      pts.push_back(pr->pixel);
    }
    if (!all_in_front) continue;

    const auto hull = detail::convex_hull(pts);
    if (hull.size() < 3) continue;
    double u_min = hull[0].u, u_max = hull[0].u, v_min = hull[0].v, v_max = hull[0].v;
    for (const PixelCoord& p : hull) {
      u_min = std::min(u_min, p.u);
      u_max = std::max(u_max, p.u);
      v_min = std::min(v_min, p.v);
      v_max = std::max(v_max, p.v);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(u_min)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(u_max)));
    const int y0 = std::max(0, static_cast<int>(std::floor(v_min)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(v_max)));
    const auto color = detail::class_color(box.class_label);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (detail::inside_hull(hull, x + 0.5, y + 0.5))
          img.set_rgb(x, y, color[0], color[1], color[2]);
  }
  return img;
}

}  // namespace vrig
