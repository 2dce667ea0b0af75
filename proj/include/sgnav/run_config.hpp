#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sgnav/curriculum.hpp"
#include "sgnav/environment.hpp"
#include "sgnav/pure_pursuit.hpp"
#include "sgnav/sac.hpp"
#include "sgnav/scene.hpp"
#include "sgnav/scene_gen.hpp"

namespace sgnav {

/// What the graph slot of the observation carries.
///  - NoGraph: zeros.
///  - TargetOnly: features of the node most similar to the goal.
///  - ScenePooled: similarity-weighted pooling over a noisy scene graph.
///  - GtGraph: the same pooling over the exact graph.
enum class Ablation { NoGraph, TargetOnly, ScenePooled, GtGraph };

std::string to_string(Ablation a);
std::optional<Ablation> parse_ablation(std::string_view name);

struct RunConfig {
  /// Scene file; when empty, scenes come from `family`.
  std::string scene_path;
  SceneFamily family = SceneFamily::Simple;
  Ablation ablation = Ablation::ScenePooled;
  double control_fraction = 0.3;
  long total_steps = 50000;
  std::uint64_t seed = 0;

  long warmup_steps = 2000;
  int update_every = 1;
  std::size_t buffer_capacity = 100000;
  long checkpoint_every = 0;  // env steps; 0 keeps only the final checkpoint

  double temperature = 0.1;
  double graph_noise_sigma = 0.05;  // m
  double graph_drop_prob = 0.2;

  double grid_resolution = 0.1;
  double planning_margin = 0.15;  // added to the footprint radius for the planner grid
  std::string cache_dir;

  EnvConfig env;
  RobotFootprint footprint;
  CurriculumConfig curriculum;
  PurePursuitConfig pursuit;
  SacConfig sac;

  /// Throws Error(Config).
  void validate() const;
  /// SAC config with obs_dim filled from the environment layout.
  SacConfig sac_config() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected. Throws
/// Error(Config).
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& c, const std::filesystem::path& path);

/// Per-episode setup shared by training and evaluation.
struct EpisodeScene {
  Scene scene;
  SceneGraph graph;     // ground truth
  Vector goal;          // observation goal slot
  Vector query;         // encoder query
};

/// Draws the episode's scene: a fresh family instance, or the configured scene
/// file with a random active target.
EpisodeScene draw_episode_scene(const RunConfig& config, const Scene* fixed, std::mt19937_64& rng);

/// Graph slot contents for the configured ablation (empty for NoGraph).
Vector graph_slot(const RunConfig& config, const EpisodeScene& ep, std::mt19937_64& rng);

}  // namespace sgnav
