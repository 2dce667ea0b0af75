#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sgnav/geometry.hpp"
#include "sgnav/graph.hpp"
#include "sgnav/scene.hpp"

namespace sgnav {

enum class EpisodeMode { Policy, Control };

struct EnvConfig {
  double dt = 0.1;
  int max_steps = 300;
  VelocityLimits limits;
  double dist_threshold = 1.1;             // m
  double angle_threshold = deg2rad(13.0);  // rad
  int num_rays = 24;
  double ray_fan = deg2rad(120.0);
  double ray_max = 10.0;
  std::size_t embedding_dim = 32;

  void validate() const;
  /// twist (2) + goal embedding (D) + rays (K) + graph encoding (D + 6)
  std::size_t observation_dim() const {
    return 2 + embedding_dim + static_cast<std::size_t>(num_rays) + encoding_dim(embedding_dim);
  }
};

struct EnvState {
  Pose pose;
  Twist twist;
  int step_count = 0;
  EpisodeMode mode = EpisodeMode::Policy;
};

struct SubtaskStatus {
  bool dist_ok = false;
  bool angle_ok = false;
};

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  bool success = false;
  bool collision = false;
};

inline constexpr int kMaxInitAttempts = 1000;

/// Planar distance from the robot to the active target.
double distance_error(const Pose& pose, const Scene& scene);
/// wrap(bearing_to_target - theta); 0 when the robot sits on the target.
double angle_error(const Pose& pose, const Scene& scene);

/// Places the robot on the circle of radius R around the active target at a
/// uniform random angle, heading offset from the bearing by +-phi (random
/// sign). Rejects inadmissible poses; throws InitExhausted after
/// `max_attempts` rejections.
Pose init_robot(double R, double phi, const Scene& scene, const RobotFootprint& footprint,
                std::mt19937_64& rng, int max_attempts = kMaxInitAttempts);

/// Unicycle update with midpoint heading.
Pose step_kinematics(const Pose& pose, const Twist& twist, double dt);

SubtaskStatus subtask_status(const Pose& pose, const Scene& scene, double dist_threshold,
                             double angle_threshold);

/// -5 on collision or timeout, +2 when both subtasks hold, -0.1 when exactly
/// one holds, -0.2 otherwise.
double reward(const SubtaskStatus& status, bool collided, bool timed_out);

/// Distance along a ray to the first obstacle or wall, capped at ray_max.
double ray_distance(Vec2 origin, double angle, const Scene& scene, double ray_max);

/// K rays evenly spread over the forward fan (first at -fan/2, last at
/// +fan/2), each normalized to [0, 1] by ray_max.
Vector cast_rays(const Pose& pose, const Scene& scene, const EnvConfig& config);

/// Assembles [twist/limits, goal, rays, graph]. `graph_encoding` is in world
/// coordinates; its pooled position is re-expressed in the robot frame. An
/// empty span fills the graph slot with zeros. Throws DimensionMismatch.
Vector observe(const EnvState& state, const Scene& scene, const EnvConfig& config,
               std::span<const double> graph_encoding, std::span<const double> goal_embedding);

struct TraceRow {
  int step;
  Pose pose;
  Twist action;
  double reward;
  bool terminated;
  bool truncated;
  bool success;
  bool collision;
};

/// Kinematic navigation environment for one episode at a time.
class NavEnv {
 public:
  NavEnv(EnvConfig config, RobotFootprint footprint);

  /// Starts an episode. `graph_encoding` may be empty (no-graph ablation).
  Vector reset(const Scene& scene, const Pose& start, EpisodeMode mode, Vector goal_embedding,
               Vector graph_encoding);

  StepResult step(const Twist& action);
  Vector observation() const;

  const EnvState& state() const { return state_; }
  const Scene& scene() const { return *scene_; }
  const EnvConfig& config() const { return config_; }
  const RobotFootprint& footprint() const { return footprint_; }

  void set_trace(bool enabled) { tracing_ = enabled; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  EnvConfig config_;
  RobotFootprint footprint_;
  const Scene* scene_ = nullptr;
  std::optional<Scene> owned_scene_;
  EnvState state_;
  Vector goal_;
  Vector graph_;
  bool tracing_ = false;
  std::vector<TraceRow> trace_;
};

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path);

}  // namespace sgnav
