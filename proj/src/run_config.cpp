#include "sgnav/run_config.hpp"

#include <fstream>
#include <set>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

using nlohmann::json;

// Reads fields of one JSON object and rejects keys nobody asked for.
class FieldReader {
 public:
  FieldReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(ErrorCode::Config, path_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Config, path_ + key + ": " + e.what());
    }
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw Error(ErrorCode::Config, "unknown key " + path_ + it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::NoGraph: return "NO_GRAPH";
    case Ablation::TargetOnly: return "TARGET_ONLY";
    case Ablation::ScenePooled: return "SCENE_POOLED";
    case Ablation::GtGraph: return "GT_GRAPH";
  }
  return "?";
}

std::optional<Ablation> parse_ablation(std::string_view name) {
  for (Ablation a : {Ablation::NoGraph, Ablation::TargetOnly, Ablation::ScenePooled,
                     Ablation::GtGraph}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

void RunConfig::validate() const {
  if (!(control_fraction >= 0.0 && control_fraction < 1.0)) {
    throw Error(ErrorCode::Config, "control_fraction must lie in [0, 1)");
  }
  if (total_steps < 0) throw Error(ErrorCode::Config, "total_steps must be >= 0");
  if (warmup_steps < 0) throw Error(ErrorCode::Config, "warmup_steps must be >= 0");
  if (update_every <= 0) throw Error(ErrorCode::Config, "update_every must be > 0");
  if (buffer_capacity == 0) throw Error(ErrorCode::Config, "buffer_capacity must be > 0");
  if (checkpoint_every < 0) throw Error(ErrorCode::Config, "checkpoint_every must be >= 0");
  if (!(temperature > 0.0)) throw Error(ErrorCode::Config, "temperature must be > 0");
  if (!(graph_noise_sigma >= 0.0)) throw Error(ErrorCode::Config, "graph_noise_sigma must be >= 0");
  if (!(graph_drop_prob >= 0.0 && graph_drop_prob < 1.0)) {
    throw Error(ErrorCode::Config, "graph_drop_prob must lie in [0, 1)");
  }
  if (!(grid_resolution > 0.0)) throw Error(ErrorCode::Config, "grid_resolution must be > 0");
  if (!(planning_margin >= 0.0)) throw Error(ErrorCode::Config, "planning_margin must be >= 0");
  if (!(footprint.radius > 0.0)) throw Error(ErrorCode::Config, "footprint.radius must be > 0");
  env.validate();
  curriculum.validate();
  pursuit.validate(grid_resolution);
  sac_config().validate();
}

SacConfig RunConfig::sac_config() const {
  SacConfig s = sac;
  s.obs_dim = static_cast<int>(env.observation_dim());
  return s;
}

json to_json(const RunConfig& c) {
  json j;
  j["scene_path"] = c.scene_path;
  j["family"] = to_string(c.family);
  j["ablation"] = to_string(c.ablation);
  j["control_fraction"] = c.control_fraction;
  j["total_steps"] = c.total_steps;
  j["seed"] = c.seed;
  j["warmup_steps"] = c.warmup_steps;
  j["update_every"] = c.update_every;
  j["buffer_capacity"] = c.buffer_capacity;
  j["checkpoint_every"] = c.checkpoint_every;
  j["temperature"] = c.temperature;
  j["graph_noise_sigma"] = c.graph_noise_sigma;
  j["graph_drop_prob"] = c.graph_drop_prob;
  j["grid_resolution"] = c.grid_resolution;
  j["planning_margin"] = c.planning_margin;
  j["cache_dir"] = c.cache_dir;
  j["env"] = {{"dt", c.env.dt},
              {"max_steps", c.env.max_steps},
              {"v_max", c.env.limits.v_max},
              {"w_max", c.env.limits.w_max},
              {"dist_threshold", c.env.dist_threshold},
              {"angle_threshold_deg", rad2deg(c.env.angle_threshold)},
              {"num_rays", c.env.num_rays},
              {"ray_fan_deg", rad2deg(c.env.ray_fan)},
              {"ray_max", c.env.ray_max},
              {"embedding_dim", c.env.embedding_dim}};
  j["footprint"] = {{"radius", c.footprint.radius}};
  j["curriculum"] = {{"r_min", c.curriculum.r_min},     {"r_max", c.curriculum.r_max},
                     {"r_step", c.curriculum.r_step},   {"phi_max", c.curriculum.phi_max},
                     {"phi_step", c.curriculum.phi_step}, {"window", c.curriculum.window},
                     {"threshold", c.curriculum.threshold}};
  j["pursuit"] = {{"lookahead", c.pursuit.lookahead},
                  {"cruise_speed", c.pursuit.cruise_speed},
                  {"arrival_tolerance", c.pursuit.arrival_tolerance}};
  j["sac"] = {{"hidden", c.sac.hidden},         {"actor_lr", c.sac.actor_lr},
              {"critic_lr", c.sac.critic_lr},   {"alpha_lr", c.sac.alpha_lr},
              {"gamma", c.sac.gamma},           {"polyak", c.sac.polyak},
              {"init_alpha", c.sac.init_alpha}, {"batch_size", c.sac.batch_size},
              {"log_std_min", c.sac.log_std_min}, {"log_std_max", c.sac.log_std_max}};
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  FieldReader r(j, "");
  std::string family = to_string(c.family);
  std::string ablation = to_string(c.ablation);
  r.get("scene_path", c.scene_path);
  r.get("family", family);
  r.get("ablation", ablation);
  r.get("control_fraction", c.control_fraction);
  r.get("total_steps", c.total_steps);
  r.get("seed", c.seed);
  r.get("warmup_steps", c.warmup_steps);
  r.get("update_every", c.update_every);
  r.get("buffer_capacity", c.buffer_capacity);
  r.get("checkpoint_every", c.checkpoint_every);
  r.get("temperature", c.temperature);
  r.get("graph_noise_sigma", c.graph_noise_sigma);
  r.get("graph_drop_prob", c.graph_drop_prob);
  r.get("grid_resolution", c.grid_resolution);
  r.get("planning_margin", c.planning_margin);
  r.get("cache_dir", c.cache_dir);

  auto fam = parse_scene_family(family);
  if (!fam) throw Error(ErrorCode::Config, "unknown scene family " + family);
  c.family = *fam;
  auto abl = parse_ablation(ablation);
  if (!abl) throw Error(ErrorCode::Config, "unknown ablation " + ablation);
  c.ablation = *abl;

  if (const json* e = r.sub("env")) {
    FieldReader s(*e, "env.");
    double angle = rad2deg(c.env.angle_threshold);
    double fan = rad2deg(c.env.ray_fan);
    s.get("dt", c.env.dt);
    s.get("max_steps", c.env.max_steps);
    s.get("v_max", c.env.limits.v_max);
    s.get("w_max", c.env.limits.w_max);
    s.get("dist_threshold", c.env.dist_threshold);
    s.get("angle_threshold_deg", angle);
    s.get("num_rays", c.env.num_rays);
    s.get("ray_fan_deg", fan);
    s.get("ray_max", c.env.ray_max);
    s.get("embedding_dim", c.env.embedding_dim);
    s.finish();
    c.env.angle_threshold = deg2rad(angle);
    c.env.ray_fan = deg2rad(fan);
  }
  if (const json* e = r.sub("footprint")) {
    FieldReader s(*e, "footprint.");
    s.get("radius", c.footprint.radius);
    s.finish();
  }
  if (const json* e = r.sub("curriculum")) {
    FieldReader s(*e, "curriculum.");
    s.get("r_min", c.curriculum.r_min);
    s.get("r_max", c.curriculum.r_max);
    s.get("r_step", c.curriculum.r_step);
    s.get("phi_max", c.curriculum.phi_max);
    s.get("phi_step", c.curriculum.phi_step);
    s.get("window", c.curriculum.window);
    s.get("threshold", c.curriculum.threshold);
    s.finish();
  }
  if (const json* e = r.sub("pursuit")) {
    FieldReader s(*e, "pursuit.");
    s.get("lookahead", c.pursuit.lookahead);
    s.get("cruise_speed", c.pursuit.cruise_speed);
    s.get("arrival_tolerance", c.pursuit.arrival_tolerance);
    s.finish();
  }
  if (const json* e = r.sub("sac")) {
    FieldReader s(*e, "sac.");
    s.get("hidden", c.sac.hidden);
    s.get("actor_lr", c.sac.actor_lr);
    s.get("critic_lr", c.sac.critic_lr);
    s.get("alpha_lr", c.sac.alpha_lr);
    s.get("gamma", c.sac.gamma);
    s.get("polyak", c.sac.polyak);
    s.get("init_alpha", c.sac.init_alpha);
    s.get("batch_size", c.sac.batch_size);
    s.get("log_std_min", c.sac.log_std_min);
    s.get("log_std_max", c.sac.log_std_max);
    s.finish();
  }
  r.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write config " + path.string());
  out << to_json(c).dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

EpisodeScene draw_episode_scene(const RunConfig& config, const Scene* fixed,
                                std::mt19937_64& rng) {
  const std::size_t d = config.env.embedding_dim;
  std::optional<Scene> scene;
  if (fixed != nullptr) {
    std::uniform_int_distribution<std::size_t> pick(0, fixed->targets().size() - 1);
    scene.emplace(fixed->with_active_target(pick(rng)));
  } else {
    scene.emplace(gen_scene(config.family, rng()));
  }
  EpisodeScene ep{*scene, ground_truth_graph(*scene, d), pseudo_embed(scene->goal_text(), d),
                  target_embedding(*scene, d)};
  return ep;
}

Vector graph_slot(const RunConfig& config, const EpisodeScene& ep, std::mt19937_64& rng) {
  switch (config.ablation) {
    case Ablation::NoGraph:
      return {};
    case Ablation::GtGraph:
      return encode_graph(ep.graph, ep.query, config.temperature);
    case Ablation::TargetOnly:
    case Ablation::ScenePooled: {
      // the active target is the last node of the ground-truth graph
      const SceneGraph noisy = graph_noise(ep.graph, ep.graph.nodes.size() - 1, rng,
                                           config.graph_noise_sigma, config.graph_drop_prob);
      if (config.ablation == Ablation::ScenePooled) {
        return encode_graph(noisy, ep.query, config.temperature);
      }
      return node_feature(noisy.nodes[target_node(noisy, ep.query)]);
    }
  }
  return {};
}

}  // namespace sgnav
