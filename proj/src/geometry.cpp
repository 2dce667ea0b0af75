#include "sgnav/geometry.hpp"

#include <algorithm>

#include "sgnav/error.hpp"

namespace sgnav {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NoTargetCell: return "NoTargetCell";
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::InitExhausted: return "InitExhausted";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NaNDetected: return "NaNDetected";
    case ErrorCode::EmptyBucket: return "EmptyBucket";
  }
  return "Unknown";
}

double wrap_angle(double a) {
  if (a >= -kPi && a < kPi) return a;
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift because of rounding.
  if (r >= kPi) r -= kTwoPi;
  return r;
}

Twist VelocityLimits::clamp(const Twist& t) const {
  return {std::clamp(t.v, -v_max, v_max), std::clamp(t.w, -w_max, w_max)};
}

Vec2 to_robot_frame(const Pose& pose, Vec2 world) {
  const double dx = world.x - pose.x;
  const double dy = world.y - pose.y;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * dx + s * dy, -s * dx + c * dy};
}

}  // namespace sgnav
