#include "sgnav/scene.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

bool inside_bounds(const Obstacle& o, const Bounds& b) {
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s.center.x - s.half_extent.x >= b.min_x &&
                 s.center.x + s.half_extent.x <= b.max_x &&
                 s.center.y - s.half_extent.y >= b.min_y &&
                 s.center.y + s.half_extent.y <= b.max_y;
        } else {
          return s.center.x - s.radius >= b.min_x && s.center.x + s.radius <= b.max_x &&
                 s.center.y - s.radius >= b.min_y && s.center.y + s.radius <= b.max_y;
        }
      },
      o.shape);
}

bool positive_size(const Obstacle& o) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s.half_extent.x > 0.0 && s.half_extent.y > 0.0;
        } else {
          return s.radius > 0.0;
        }
      },
      o.shape);
}

void hash_double(std::uint64_t& h, double v) {
  char buf[sizeof(double)];
  std::memcpy(buf, &v, sizeof v);
  h = fnv1a64(std::string_view(buf, sizeof buf), h);
}

double wall_clearance(Vec2 p, const Bounds& b) {
  return std::min({p.x - b.min_x, b.max_x - p.x, p.y - b.min_y, b.max_y - p.y});
}

}  // namespace

std::string Obstacle::text() const {
  return color.empty() ? label : color + " " + label;
}

Vec3 Obstacle::bbox_center() const {
  const Vec2 c = std::visit([](const auto& s) { return s.center; }, shape);
  return {c.x, c.y, 0.5 * height};
}

Vec3 Obstacle::bbox_extent() const {
  return std::visit(
      [&](const auto& s) -> Vec3 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return {2.0 * s.half_extent.x, 2.0 * s.half_extent.y, height};
        } else {
          return {2.0 * s.radius, 2.0 * s.radius, height};
        }
      },
      shape);
}

Scene::Scene(Bounds bounds, std::vector<Obstacle> obstacles,
             std::vector<TargetCandidate> targets, std::size_t active_target,
             std::map<std::string, std::string> synonyms)
    : bounds_(bounds),
      obstacles_(std::move(obstacles)),
      targets_(std::move(targets)),
      active_target_(active_target),
      synonyms_(std::move(synonyms)) {
  if (!(bounds_.max_x > bounds_.min_x) || !(bounds_.max_y > bounds_.min_y)) {
    throw Error(ErrorCode::Config, "scene bounds are empty");
  }
  if (targets_.empty()) throw Error(ErrorCode::Config, "scene has no target candidates");
  if (active_target_ >= targets_.size()) {
    throw Error(ErrorCode::Config, "active_target " + std::to_string(active_target_) +
                                       " out of range");
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const auto& o = obstacles_[i];
    if (o.label.empty()) {
      throw Error(ErrorCode::Config, "obstacle " + std::to_string(i) + " has an empty label");
    }
    if (!positive_size(o) || !(o.height > 0.0)) {
      throw Error(ErrorCode::Config, "obstacle '" + o.label + "' has non-positive size");
    }
    if (!inside_bounds(o, bounds_)) {
      throw Error(ErrorCode::Config, "obstacle '" + o.label + "' leaves the scene bounds");
    }
  }
  for (const auto& t : targets_) {
    if (t.label.empty()) throw Error(ErrorCode::Config, "target candidate has an empty label");
  }
}

std::string Scene::goal_text() const {
  const auto& t = active();
  return t.goal_text.empty() ? t.label : t.goal_text;
}

std::string Scene::canonical_text(std::string_view text) const {
  auto it = synonyms_.find(std::string(text));
  return it == synonyms_.end() ? std::string(text) : it->second;
}

Scene Scene::with_active_target(std::size_t index) const {
  return Scene(bounds_, obstacles_, targets_, index, synonyms_);
}

std::uint64_t Scene::geometry_hash() const {
  std::uint64_t h = fnv1a64("sgnav-scene");
  for (double v : {bounds_.min_x, bounds_.min_y, bounds_.max_x, bounds_.max_y}) hash_double(h, v);
  for (const auto& o : obstacles_) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) {
            h = fnv1a64("box", h);
            for (double v : {s.center.x, s.center.y, s.half_extent.x, s.half_extent.y})
              hash_double(h, v);
          } else {
            h = fnv1a64("circle", h);
            for (double v : {s.center.x, s.center.y, s.radius}) hash_double(h, v);
          }
        },
        o.shape);
  }
  for (const auto& t : targets_) {
    for (double v : {t.position.x, t.position.y}) hash_double(h, v);
  }
  return h;
}

double distance_to(Vec2 p, const Obstacle& obstacle) {
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          const double dx = std::max(std::abs(p.x - s.center.x) - s.half_extent.x, 0.0);
          const double dy = std::max(std::abs(p.y - s.center.y) - s.half_extent.y, 0.0);
          return std::hypot(dx, dy);
        } else {
          return std::max(distance(p, s.center) - s.radius, 0.0);
        }
      },
      obstacle.shape);
}

bool collides(const Pose& pose, const RobotFootprint& footprint, const Scene& scene) {
  if (!pose.finite()) return true;
  const Vec2 p = pose.position();
  const double r = footprint.radius;
  if (wall_clearance(p, scene.bounds()) < r) return true;
  for (const auto& o : scene.obstacles()) {
    if (distance_to(p, o) < r) return true;
  }
  return false;
}

bool admissible(const Pose& pose, const RobotFootprint& footprint, const Scene& scene) {
  if (!pose.finite()) return false;
  const Vec2 p = pose.position();
  const double r = footprint.radius;
  if (!(wall_clearance(p, scene.bounds()) > r)) return false;
  for (const auto& o : scene.obstacles()) {
    if (!(distance_to(p, o) > r)) return false;
  }
  return true;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sgnav
