#ifndef HYBRID_SCENE_HPP
#define HYBRID_SCENE_HPP

#include "hybrid/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hybrid {

/// Zero-thickness wall: segment a-b extruded from the floor to `height`.
struct Wall {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double height = 1.5;
};

/// Axis-aligned solid block resting anywhere in the scene.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  bool removable = false;
  std::string label;
};

/// Static ground-truth world: flat floor at z = 0, walls, blocks and an
/// optional ceiling spanning the scene footprint.
class Scene {
 public:
  std::vector<Wall> walls;
  std::vector<Box> boxes;
  std::optional<double> ceiling_height;
  Vec2 footprint_min = Vec2::Zero();
  Vec2 footprint_max = Vec2::Zero();
  bool has_floor = true;

  /// Distance along a unit direction to the first surface, if within max_range.
  std::optional<double> raycast(const Vec3& origin, const Vec3& dir, double max_range) const;

  /// Euclidean distance from p to the nearest solid other than the floor.
  double distance_to_obstacles(const Vec3& p) const;

  /// Copy with every removable block dropped.
  Scene without_removable() const;

  bool empty() const { return walls.empty() && boxes.empty() && !ceiling_height && !has_floor; }
};

}  // namespace hybrid

#endif  // HYBRID_SCENE_HPP
