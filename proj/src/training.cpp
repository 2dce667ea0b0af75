#include "sgnav/training.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "sgnav/checkpoint.hpp"
#include "sgnav/error.hpp"
#include "sgnav/path_cache.hpp"
#include "sgnav/replay_buffer.hpp"
#include "sgnav/scene_io.hpp"

namespace sgnav {
namespace {

std::filesystem::path periodic_name(const std::filesystem::path& base, long step) {
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + "-" + std::to_string(step) + base.extension().string());
  return p;
}

}  // namespace

EpisodeMode choose_mode(std::mt19937_64& rng, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "control fraction must lie in [0, 1)");
  }
  std::bernoulli_distribution control(fraction);
  return control(rng) ? EpisodeMode::Control : EpisodeMode::Policy;
}

PathLibrary::PathLibrary(const RunConfig& config)
    : planning_{config.footprint.radius + config.planning_margin},
      resolution_(config.grid_resolution),
      cache_dir_(config.cache_dir) {}

const PathTable& PathLibrary::get(const Scene& scene) {
  const std::uint64_t h = scene.geometry_hash();
  auto it = tables_.find(h);
  if (it == tables_.end()) {
    it = tables_.emplace(h, load_or_build_paths(scene, planning_, resolution_, cache_dir_)).first;
  }
  return it->second;
}

std::optional<ExpertController> make_expert(const RunConfig& config, PathLibrary& paths,
                                            const Scene& scene, const Pose& start) {
  const PathTable& table = paths.get(scene);
  const Cell source = nearest_grid_point(start, table.grid());
  const StoredPath* stored = table.find(source, scene.active_target());
  if (stored == nullptr) return std::nullopt;
  // the start may sit inside the planning margin, off the grid; lead the
  // follower onto the source cell first instead of arcing toward a later point
  std::vector<Vec2> waypoints{start.position()};
  waypoints.insert(waypoints.end(), stored->waypoints.begin(), stored->waypoints.end());
  return ExpertController(waypoints, scene.active().position.xy(), config.pursuit,
                          config.env.limits, ExpertController::Options{});
}

Twist to_twist(std::span<const double> action, const VelocityLimits& limits) {
  return {std::clamp(action[0], -1.0, 1.0) * limits.v_max,
          std::clamp(action[1], -1.0, 1.0) * limits.w_max};
}

Vector to_action(const Twist& twist, const VelocityLimits& limits) {
  return {std::clamp(twist.v / limits.v_max, -1.0, 1.0),
          std::clamp(twist.w / limits.w_max, -1.0, 1.0)};
}

TrainingResult run_training(const RunConfig& config, const TrainingOutput& output) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const SacConfig sac_cfg = config.sac_config();
  TrainingResult result{SacAgent(sac_cfg, rng()), Curriculum(config.curriculum), {}, {}, 0};
  ReplayBuffer buffer(config.buffer_capacity, static_cast<std::size_t>(sac_cfg.obs_dim),
                      static_cast<std::size_t>(sac_cfg.action_dim));
  std::optional<Scene> fixed;
  if (!config.scene_path.empty()) fixed.emplace(load_scene(config.scene_path));
  PathLibrary paths(config);
  NavEnv env(config.env, config.footprint);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  long& steps = result.env_steps;
  long updates = 0;
  long next_checkpoint = config.checkpoint_every > 0 ? config.checkpoint_every : -1;
  Curriculum& curriculum = result.curriculum;

  for (long episode = 0; steps < config.total_steps; ++episode) {
    int step_in_episode = 0;
    try {
      const DifficultyLevel level = curriculum.current();
      const EpisodeScene ep = draw_episode_scene(config, fixed ? &*fixed : nullptr, rng);
      EpisodeMode mode = choose_mode(rng, config.control_fraction);
      const Pose start = init_robot(level.R, level.phi, ep.scene, config.footprint, rng);
      std::optional<ExpertController> expert;
      if (mode == EpisodeMode::Control) {
        expert = make_expert(config, paths, ep.scene, start);
        if (!expert) mode = EpisodeMode::Policy;
      }
      Vector obs = env.reset(ep.scene, start, mode, ep.goal, graph_slot(config, ep, rng));

      EpisodeRecord rec;
      rec.episode = episode;
      rec.mode = mode;
      rec.level = level;
      bool finished = false;
      while (steps < config.total_steps) {
        Vector action;
        if (mode == EpisodeMode::Control) {
          action = to_action(expert->step(env.state().pose), config.env.limits);
        } else if (steps < config.warmup_steps) {
          action = {uniform(rng), uniform(rng)};
        } else {
          action = result.agent.act(obs, false, rng);
        }
        const StepResult sr = env.step(to_twist(action, config.env.limits));
        ++steps;
        ++step_in_episode;
        rec.episode_return += sr.reward;
        buffer.push({obs, action, sr.reward, sr.observation, sr.terminated});
        obs = sr.observation;

        if (steps >= config.warmup_steps &&
            buffer.size() >= static_cast<std::size_t>(sac_cfg.batch_size) &&
            steps % config.update_every == 0) {
          const SacLosses l = result.agent.update(
              buffer.sample(static_cast<std::size_t>(sac_cfg.batch_size), result.agent.rng()));
          if (updates % output.loss_log_every == 0) result.losses.push_back({steps, l});
          ++updates;
        }
        if (steps == next_checkpoint && !output.checkpoint_path.empty()) {
          save_checkpoint(config, result.agent, steps, episode,
                          periodic_name(output.checkpoint_path, steps));
          next_checkpoint += config.checkpoint_every;
        }
        if (sr.terminated || sr.truncated) {
          rec.success = sr.success;
          rec.collision = sr.collision;
          rec.truncated = sr.truncated;
          finished = true;
          break;
        }
      }
      // an episode cut off by the step budget has no outcome
      if (!finished) break;
      rec.steps = step_in_episode;
      curriculum.record_outcome(rec.success, mode);
      curriculum.maybe_advance();
      curriculum.log_episode(episode);
      result.episodes.push_back(rec);
      if (output.on_episode) output.on_episode(rec);
    } catch (const Error& e) {
      throw Error(e.code(), "episode " + std::to_string(episode) + ", step " +
                                std::to_string(step_in_episode) + ": " + e.what());
    }
  }

  if (!output.checkpoint_path.empty()) {
    save_checkpoint(config, result.agent, steps, static_cast<long>(result.episodes.size()),
                    output.checkpoint_path);
  }
  if (!output.metrics_dir.empty()) {
    std::filesystem::create_directories(output.metrics_dir);
    write_history_csv(curriculum.history(), output.metrics_dir / "difficulty.csv");
    write_losses_csv(result.losses, output.metrics_dir / "losses.csv");
    write_episodes_csv(result.episodes, output.metrics_dir / "episodes.csv");
  }
  return result;
}

void write_episodes_csv(const std::vector<EpisodeRecord>& episodes,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "episode,mode,level_index,R,phi,steps,return,success,collision,truncated\n";
  char buf[256];
  for (const auto& e : episodes) {
    std::snprintf(buf, sizeof buf, "%ld,%s,%d,%.17g,%.17g,%d,%.17g,%d,%d,%d\n", e.episode,
                  e.mode == EpisodeMode::Control ? "CONTROL" : "POLICY", e.level.index,
                  e.level.R, e.level.phi, e.steps, e.episode_return, e.success, e.collision,
                  e.truncated);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_losses_csv(const std::vector<LossRecord>& losses, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "step,critic,actor,alpha_loss,alpha,mean_q\n";
  char buf[256];
  for (const auto& l : losses) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", l.step,
                  l.losses.critic, l.losses.actor, l.losses.alpha_loss, l.losses.alpha,
                  l.losses.mean_q);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace sgnav
