#include "sgnav/environment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entry distance of a ray into an axis-aligned box; 0 when starting inside.
double ray_box(Vec2 o, Vec2 d, const Box& b) {
  double t0 = 0.0;
  double t1 = kInf;
  const double lo[2] = {b.center.x - b.half_extent.x, b.center.y - b.half_extent.y};
  const double hi[2] = {b.center.x + b.half_extent.x, b.center.y + b.half_extent.y};
  const double oo[2] = {o.x, o.y};
  const double dd[2] = {d.x, d.y};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(dd[k]) < 1e-15) {
      if (oo[k] < lo[k] || oo[k] > hi[k]) return kInf;
      continue;
    }
    double ta = (lo[k] - oo[k]) / dd[k];
    double tb = (hi[k] - oo[k]) / dd[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return kInf;
  }
  return t0;
}

double ray_circle(Vec2 o, Vec2 d, const Circle& c) {
  const Vec2 m = o - c.center;
  const double b = m.dot(d);
  const double cc = m.dot(m) - c.radius * c.radius;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return kInf;
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : kInf;
}

double ray_bounds_exit(Vec2 o, Vec2 d, const Bounds& b) {
  double t = kInf;
  if (d.x > 1e-15) t = std::min(t, (b.max_x - o.x) / d.x);
  if (d.x < -1e-15) t = std::min(t, (b.min_x - o.x) / d.x);
  if (d.y > 1e-15) t = std::min(t, (b.max_y - o.y) / d.y);
  if (d.y < -1e-15) t = std::min(t, (b.min_y - o.y) / d.y);
  return std::max(t, 0.0);
}

}  // namespace

void EnvConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::Config, "dt must be > 0");
  if (max_steps < 1) throw Error(ErrorCode::Config, "max_steps must be >= 1");
  if (!(limits.v_max > 0.0) || !(limits.w_max > 0.0)) {
    throw Error(ErrorCode::Config, "velocity limits must be > 0");
  }
  if (!(dist_threshold > 0.0) || !(angle_threshold > 0.0)) {
    throw Error(ErrorCode::Config, "success thresholds must be > 0");
  }
  if (num_rays < 1 || !(ray_max > 0.0) || !(ray_fan >= 0.0)) {
    throw Error(ErrorCode::Config, "ray fan parameters invalid");
  }
  if (embedding_dim == 0) throw Error(ErrorCode::Config, "embedding_dim must be > 0");
}

double distance_error(const Pose& pose, const Scene& scene) {
  return distance(pose.position(), scene.active().position.xy());
}

double angle_error(const Pose& pose, const Scene& scene) {
  const Vec2 t = scene.active().position.xy();
  const double dx = t.x - pose.x;
  const double dy = t.y - pose.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  return wrap_angle(std::atan2(dy, dx) - pose.theta);
}

Pose init_robot(double R, double phi, const Scene& scene, const RobotFootprint& footprint,
                std::mt19937_64& rng, int max_attempts) {
  if (!(R >= 0.0 && R <= 3.0)) throw Error(ErrorCode::InvalidArgument, "R must lie in [0, 3]");
  if (!(phi >= 0.0 && phi <= kPi)) throw Error(ErrorCode::InvalidArgument, "phi must lie in [0, pi]");
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::bernoulli_distribution coin(0.5);
  const Vec2 t = scene.active().position.xy();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double alpha = angle(rng);
    const double sign = coin(rng) ? 1.0 : -1.0;
    Pose p{t.x + R * std::cos(alpha), t.y + R * std::sin(alpha), 0.0};
    // bearing from the robot back to the target is alpha + pi
    p.theta = wrap_angle(alpha + kPi + sign * phi);
    if (admissible(p, footprint, scene)) return p;
  }
  throw Error(ErrorCode::InitExhausted,
              "no admissible start pose after " + std::to_string(max_attempts) +
                  " attempts (R=" + std::to_string(R) + ", phi=" + std::to_string(phi) + ")");
}

Pose step_kinematics(const Pose& pose, const Twist& twist, double dt) {
  const double mid = pose.theta + 0.5 * twist.w * dt;
  return {pose.x + twist.v * std::cos(mid) * dt, pose.y + twist.v * std::sin(mid) * dt,
          wrap_angle(pose.theta + twist.w * dt)};
}

SubtaskStatus subtask_status(const Pose& pose, const Scene& scene, double dist_threshold,
                             double angle_threshold) {
  return {distance_error(pose, scene) <= dist_threshold,
          std::abs(angle_error(pose, scene)) <= angle_threshold};
}

double reward(const SubtaskStatus& status, bool collided, bool timed_out) {
  if (collided || timed_out) return -5.0;
  if (status.dist_ok && status.angle_ok) return 2.0;
  if (status.dist_ok || status.angle_ok) return -0.1;
  return -0.2;
}

double ray_distance(Vec2 origin, double angle, const Scene& scene, double ray_max) {
  const Vec2 d{std::cos(angle), std::sin(angle)};
  double t = ray_bounds_exit(origin, d, scene.bounds());
  for (const auto& o : scene.obstacles()) {
    const double ti = std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) {
            return ray_box(origin, d, s);
          } else {
            return ray_circle(origin, d, s);
          }
        },
        o.shape);
    t = std::min(t, ti);
  }
  return std::clamp(t, 0.0, ray_max);
}

Vector cast_rays(const Pose& pose, const Scene& scene, const EnvConfig& config) {
  Vector rays(static_cast<std::size_t>(config.num_rays));
  const int k = config.num_rays;
  for (int i = 0; i < k; ++i) {
    const double offset = k == 1 ? 0.0 : -0.5 * config.ray_fan + config.ray_fan * i / (k - 1);
    rays[static_cast<std::size_t>(i)] =
        ray_distance(pose.position(), pose.theta + offset, scene, config.ray_max) / config.ray_max;
  }
  return rays;
}

Vector observe(const EnvState& state, const Scene& scene, const EnvConfig& config,
               std::span<const double> graph_encoding, std::span<const double> goal_embedding) {
  const std::size_t d = config.embedding_dim;
  if (goal_embedding.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "goal embedding length " +
                                                  std::to_string(goal_embedding.size()) +
                                                  " != " + std::to_string(d));
  }
  if (!graph_encoding.empty() && graph_encoding.size() != encoding_dim(d)) {
    throw Error(ErrorCode::DimensionMismatch, "graph encoding length " +
                                                  std::to_string(graph_encoding.size()) +
                                                  " != " + std::to_string(encoding_dim(d)));
  }
  Vector obs;
  obs.reserve(config.observation_dim());
  obs.push_back(state.twist.v / config.limits.v_max);
  obs.push_back(state.twist.w / config.limits.w_max);
  obs.insert(obs.end(), goal_embedding.begin(), goal_embedding.end());
  const Vector rays = cast_rays(state.pose, scene, config);
  obs.insert(obs.end(), rays.begin(), rays.end());
  if (graph_encoding.empty()) {
    obs.resize(config.observation_dim(), 0.0);
  } else {
    const Vec2 local = to_robot_frame(state.pose, {graph_encoding[0], graph_encoding[1]});
    obs.push_back(local.x);
    obs.push_back(local.y);
    obs.insert(obs.end(), graph_encoding.begin() + 2, graph_encoding.end());
  }
  return obs;
}

NavEnv::NavEnv(EnvConfig config, RobotFootprint footprint)
    : config_(config), footprint_(footprint) {
  config_.validate();
  if (!(footprint_.radius > 0.0)) throw Error(ErrorCode::Config, "footprint radius must be > 0");
}

Vector NavEnv::reset(const Scene& scene, const Pose& start, EpisodeMode mode,
                     Vector goal_embedding, Vector graph_encoding) {
  owned_scene_.emplace(scene);
  scene_ = &*owned_scene_;
  state_ = EnvState{start, Twist{}, 0, mode};
  goal_ = std::move(goal_embedding);
  graph_ = std::move(graph_encoding);
  trace_.clear();
  return observation();
}

Vector NavEnv::observation() const {
  if (scene_ == nullptr) throw Error(ErrorCode::InvalidArgument, "environment not reset");
  return observe(state_, *scene_, config_, graph_, goal_);
}

StepResult NavEnv::step(const Twist& action) {
  if (scene_ == nullptr) throw Error(ErrorCode::InvalidArgument, "environment not reset");
  const Twist cmd = config_.limits.clamp(action);
  state_.pose = step_kinematics(state_.pose, cmd, config_.dt);
  state_.twist = cmd;
  ++state_.step_count;

  StepResult r;
  if (collides(state_.pose, footprint_, *scene_)) {
    r.collision = true;
    r.terminated = true;
    r.reward = reward({}, true, false);
  } else {
    const SubtaskStatus s =
        subtask_status(state_.pose, *scene_, config_.dist_threshold, config_.angle_threshold);
    if (s.dist_ok && s.angle_ok) {
      r.success = true;
      r.terminated = true;
      r.reward = reward(s, false, false);
    } else if (state_.step_count >= config_.max_steps) {
      r.truncated = true;
      r.reward = reward(s, false, true);
    } else {
      r.reward = reward(s, false, false);
    }
  }
  r.observation = observation();
  if (tracing_) {
    trace_.push_back({state_.step_count, state_.pose, cmd, r.reward, r.terminated, r.truncated,
                      r.success, r.collision});
  }
  return r;
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write trace " + path.string());
  out << "step,x,y,theta,v,w,reward,terminated,truncated,success,collision\n";
  char buf[256];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%d\n", t.step,
                  t.pose.x, t.pose.y, t.pose.theta, t.action.v, t.action.w, t.reward,
                  t.terminated, t.truncated, t.success, t.collision);
    out << buf;
  }
}

}  // namespace sgnav
