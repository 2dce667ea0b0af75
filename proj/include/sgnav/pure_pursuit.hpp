#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgnav/geometry.hpp"

namespace sgnav {

struct PurePursuitConfig {
  double lookahead = 0.3;          // m; corner cuts scale with it
  double cruise_speed = 0.5;       // m/s
  double arrival_tolerance = 0.15; // m

  /// Throws Error(Config) unless all fields are positive and
  /// lookahead >= grid resolution.
  void validate(double grid_resolution) const;
};

/// Index of the pursuit point: the first point at distance >= lookahead at or
/// after the point closest to the robot, or the last point.
std::size_t lookahead_index(Vec2 position, std::span<const Vec2> path, double lookahead);

/// One Pure Pursuit command: v = cruise speed, w = v * 2 y_l / L^2 toward the
/// lookahead point, clamped into `limits`. Returns zero at the final waypoint.
Twist pure_pursuit_step(const Pose& pose, std::span<const Vec2> path,
                        const PurePursuitConfig& config, const VelocityLimits& limits);

/// Resamples a polyline so consecutive points are at most `spacing` apart.
std::vector<Vec2> densify(std::span<const Vec2> path, double spacing);

/// Stateful path tracker around pure_pursuit_step. Progress along the path is
/// monotone, and the robot turns in place while the pursuit point is more than
/// `max_heading_error` off its heading.
class PathFollower {
 public:
  struct Options {
    double spacing = 0.1;
    double max_heading_error = kPi / 3.0;
    double turn_rate = 1.0;
  };

  PathFollower(std::span<const Vec2> path, PurePursuitConfig config, VelocityLimits limits);
  PathFollower(std::span<const Vec2> path, PurePursuitConfig config, VelocityLimits limits,
               Options options);

  Twist step(const Pose& pose);
  bool arrived(const Pose& pose) const;
  const std::vector<Vec2>& path() const { return path_; }

 private:
  std::vector<Vec2> path_;
  PurePursuitConfig config_;
  VelocityLimits limits_;
  Options options_;
  std::size_t progress_ = 0;
};

/// The imitation-learning control module: follows a stored path toward the
/// target and, once close enough, turns in place to face it.
class ExpertController {
 public:
  struct Options {
    double align_radius = 1.0;  // start aligning inside this distance to the target
    double align_gain = 3.0;
    double turn_rate = 1.0;
  };

  ExpertController(std::span<const Vec2> path, Vec2 target, PurePursuitConfig config,
                   VelocityLimits limits, Options options);

  Twist step(const Pose& pose);

 private:
  PathFollower follower_;
  Vec2 target_;
  VelocityLimits limits_;
  Options options_;
  bool aligning_ = false;
};

}  // namespace sgnav
