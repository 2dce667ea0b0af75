#pragma once

#include <cmath>
#include <numbers>

namespace sgnav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
  double norm() const { return std::hypot(x, y); }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 xy() const { return {x, y}; }
  friend bool operator==(Vec3, Vec3) = default;
};

/// Planar robot configuration. theta is kept in [-pi, pi).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
};

/// Linear (m/s) and angular (rad/s) velocity command.
struct Twist {
  double v = 0.0;
  double w = 0.0;
};

/// The admissible control set: a box |v| <= v_max, |w| <= w_max.
struct VelocityLimits {
  double v_max = 1.0;
  double w_max = 1.5;

  bool admits(const Twist& t) const {
    return std::abs(t.v) <= v_max && std::abs(t.w) <= w_max;
  }
  Twist clamp(const Twist& t) const;
};

/// Expresses a world point in the frame of `pose` (x forward, y left).
Vec2 to_robot_frame(const Pose& pose, Vec2 world);

}  // namespace sgnav
