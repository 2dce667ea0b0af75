#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "sgnav/curriculum.hpp"
#include "sgnav/dijkstra.hpp"
#include "sgnav/run_config.hpp"
#include "sgnav/sac.hpp"

namespace sgnav {

/// CONTROL with probability `fraction`, else POLICY.
EpisodeMode choose_mode(std::mt19937_64& rng, double fraction);

struct EpisodeRecord {
  long episode = 0;
  EpisodeMode mode = EpisodeMode::Policy;
  DifficultyLevel level;
  int steps = 0;
  double episode_return = 0.0;
  bool success = false;
  bool collision = false;
  bool truncated = false;
};

struct LossRecord {
  long step = 0;
  SacLosses losses;
};

struct TrainingOutput {
  /// difficulty.csv, losses.csv and episodes.csv go here when non-empty.
  std::filesystem::path metrics_dir;
  /// Final checkpoint; periodic ones get a "-<step>" suffix.
  std::filesystem::path checkpoint_path;
  long loss_log_every = 100;  // SAC updates between loss rows
  std::function<void(const EpisodeRecord&)> on_episode;
};

struct TrainingResult {
  SacAgent agent;
  Curriculum curriculum;
  std::vector<EpisodeRecord> episodes;
  std::vector<LossRecord> losses;
  long env_steps = 0;
};

/// Planner tables keyed by scene geometry, built on demand with the inflated
/// planning footprint.
class PathLibrary {
 public:
  explicit PathLibrary(const RunConfig& config);
  const PathTable& get(const Scene& scene);

 private:
  RobotFootprint planning_;
  double resolution_;
  std::filesystem::path cache_dir_;
  std::map<std::uint64_t, PathTable> tables_;
};

/// Expert rollout controller for the scene's active target, or nullopt when
/// the planner has no path from `start`.
std::optional<ExpertController> make_expert(const RunConfig& config, PathLibrary& paths,
                                            const Scene& scene, const Pose& start);

/// Normalized action in [-1, 1]^2 <-> twist within the velocity limits.
Twist to_twist(std::span<const double> action, const VelocityLimits& limits);
Vector to_action(const Twist& twist, const VelocityLimits& limits);

/// Episode loop: curriculum level, robot placement, mode choice, rollout,
/// replay, SAC updates after warmup, curriculum bookkeeping. Errors are
/// rethrown with the episode and step attached.
TrainingResult run_training(const RunConfig& config, const TrainingOutput& output = {});

void write_episodes_csv(const std::vector<EpisodeRecord>& episodes,
                        const std::filesystem::path& path);
void write_losses_csv(const std::vector<LossRecord>& losses, const std::filesystem::path& path);

}  // namespace sgnav
