#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgnav/geometry.hpp"

namespace sgnav {

struct Box {
  Vec2 center;
  Vec2 half_extent;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// A static obstacle. Navigation is planar; `height` only feeds the scene
/// graph bounding box.
struct Obstacle {
  std::variant<Box, Circle> shape;
  double height = 1.0;
  std::string label;
  std::string color;

  /// "<color> <label>", or just the label when uncolored.
  std::string text() const;
  Vec3 bbox_center() const;
  Vec3 bbox_extent() const;
};

struct TargetCandidate {
  std::string label;
  Vec3 position;
  Vec3 extent{0.15, 0.15, 0.08};
  /// Goal command issued when this candidate is active. Empty means `label`.
  std::string goal_text;
};

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

/// Immutable scene description. The constructor validates every invariant and
/// throws Error(Config) on violation.
class Scene {
 public:
  Scene(Bounds bounds, std::vector<Obstacle> obstacles,
        std::vector<TargetCandidate> targets, std::size_t active_target,
        std::map<std::string, std::string> synonyms = {});

  const Bounds& bounds() const { return bounds_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const std::vector<TargetCandidate>& targets() const { return targets_; }
  std::size_t active_target() const { return active_target_; }
  const TargetCandidate& active() const { return targets_[active_target_]; }
  const std::map<std::string, std::string>& synonyms() const { return synonyms_; }

  std::string goal_text() const;
  /// Maps text through the synonym table (identity when absent).
  std::string canonical_text(std::string_view text) const;

  Scene with_active_target(std::size_t index) const;

  /// Stable 64-bit hash of the geometry and target slots (not the active
  /// target), used to key planner caches.
  std::uint64_t geometry_hash() const;

 private:
  Bounds bounds_;
  std::vector<Obstacle> obstacles_;
  std::vector<TargetCandidate> targets_;
  std::size_t active_target_;
  std::map<std::string, std::string> synonyms_;
};

/// Disc approximation of the robot base.
struct RobotFootprint {
  double radius = 0.3;
};

/// Euclidean distance from a point to the obstacle's planar shape; 0 inside.
double distance_to(Vec2 p, const Obstacle& obstacle);

/// True iff the footprint disc at `pose` overlaps an obstacle or leaves the
/// bounds. Touching (distance exactly equal to the radius) is not a collision.
bool collides(const Pose& pose, const RobotFootprint& footprint, const Scene& scene);

/// True iff every obstacle and every wall is strictly farther than the radius.
bool admissible(const Pose& pose, const RobotFootprint& footprint, const Scene& scene);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);

}  // namespace sgnav
