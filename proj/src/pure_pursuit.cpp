#include "sgnav/pure_pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgnav/error.hpp"

namespace sgnav {

void PurePursuitConfig::validate(double grid_resolution) const {
  if (!(lookahead > 0.0) || !(cruise_speed > 0.0) || !(arrival_tolerance > 0.0)) {
    throw Error(ErrorCode::Config, "pure pursuit parameters must be positive");
  }
  if (lookahead < grid_resolution) {
    throw Error(ErrorCode::Config, "pure pursuit lookahead must be >= grid resolution");
  }
}

std::size_t lookahead_index(Vec2 position, std::span<const Vec2> path, double lookahead) {
  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = distance(path[i], position);
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  for (std::size_t i = closest; i < path.size(); ++i) {
    if (distance(path[i], position) >= lookahead) return i;
  }
  return path.size() - 1;
}

Twist pure_pursuit_step(const Pose& pose, std::span<const Vec2> path,
                        const PurePursuitConfig& config, const VelocityLimits& limits) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "pure pursuit needs a nonempty path");
  if (distance(pose.position(), path.back()) <= config.arrival_tolerance) return {0.0, 0.0};

  const Vec2 goal = path[lookahead_index(pose.position(), path, config.lookahead)];
  const Vec2 local = to_robot_frame(pose, goal);
  const double l2 = local.x * local.x + local.y * local.y;
  const double curvature = l2 > 0.0 ? 2.0 * local.y / l2 : 0.0;
  const double v = config.cruise_speed;
  return limits.clamp({v, v * curvature});
}

std::vector<Vec2> densify(std::span<const Vec2> path, double spacing) {
  std::vector<Vec2> out;
  if (path.empty()) return out;
  out.push_back(path.front());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2 a = path[i - 1];
    const Vec2 b = path[i];
    const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / spacing - 1e-9)));
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

PathFollower::PathFollower(std::span<const Vec2> path, PurePursuitConfig config,
                           VelocityLimits limits)
    : PathFollower(path, config, limits, Options{}) {}

PathFollower::PathFollower(std::span<const Vec2> path, PurePursuitConfig config,
                           VelocityLimits limits, Options options)
    : path_(densify(path, options.spacing)), config_(config), limits_(limits), options_(options) {
  if (path_.empty()) throw Error(ErrorCode::InvalidArgument, "path follower needs a nonempty path");
}

bool PathFollower::arrived(const Pose& pose) const {
  return distance(pose.position(), path_.back()) <= config_.arrival_tolerance;
}

Twist PathFollower::step(const Pose& pose) {
  if (arrived(pose)) return {0.0, 0.0};

  // monotone progress: only look forward from the last closest point
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = progress_; i < path_.size(); ++i) {
    const double d = distance(path_[i], pose.position());
    if (d < best) {
      best = d;
      progress_ = i;
    }
  }
  const std::span<const Vec2> rest(path_.data() + progress_, path_.size() - progress_);
  const Vec2 goal = rest[lookahead_index(pose.position(), rest, config_.lookahead)];
  const Vec2 local = to_robot_frame(pose, goal);
  const double heading_error = std::atan2(local.y, local.x);
  if (std::abs(heading_error) > options_.max_heading_error) {
    return limits_.clamp({0.0, std::copysign(options_.turn_rate, heading_error)});
  }
  // Plain clamping keeps v and cuts w, which widens the arc toward whatever
  // the path was bending around. Slow down instead so the curvature holds.
  const VelocityLimits free_turn{limits_.v_max, std::numeric_limits<double>::infinity()};
  Twist t = pure_pursuit_step(pose, rest, config_, free_turn);
  if (std::abs(t.w) > limits_.w_max) {
    const double scale = limits_.w_max / std::abs(t.w);
    t.v *= scale;
    t.w *= scale;
  }
  return limits_.clamp(t);
}

ExpertController::ExpertController(std::span<const Vec2> path, Vec2 target,
                                   PurePursuitConfig config, VelocityLimits limits,
                                   Options options)
    : follower_(path, config, limits), target_(target), limits_(limits), options_(options) {}

Twist ExpertController::step(const Pose& pose) {
  const Vec2 local = to_robot_frame(pose, target_);
  if (!aligning_) {
    aligning_ = local.norm() <= options_.align_radius || follower_.arrived(pose);
  }
  if (!aligning_) return follower_.step(pose);
  const double err = std::atan2(local.y, local.x);
  const double w = std::clamp(options_.align_gain * err, -options_.turn_rate, options_.turn_rate);
  return limits_.clamp({0.0, w});
}

}  // namespace sgnav
