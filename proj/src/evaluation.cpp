#include "sgnav/evaluation.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgnav/error.hpp"
#include "sgnav/scene_io.hpp"

namespace sgnav {
namespace {

class SacPolicy final : public EvalPolicy {
 public:
  SacPolicy(const SacAgent& agent, VelocityLimits limits) : agent_(agent), limits_(limits) {}
  void begin(const Scene&, const Pose&, std::mt19937_64&) override {}
  Twist act(std::span<const double> obs, const Pose&, std::mt19937_64& rng) override {
    return to_twist(agent_.act(obs, true, rng), limits_);
  }

 private:
  const SacAgent& agent_;
  VelocityLimits limits_;
};

class ExpertPolicy final : public EvalPolicy {
 public:
  explicit ExpertPolicy(const RunConfig& config) : config_(config), paths_(config) {}
  void begin(const Scene& scene, const Pose& start, std::mt19937_64&) override {
    expert_ = make_expert(config_, paths_, scene, start);
  }
  Twist act(std::span<const double>, const Pose& pose, std::mt19937_64&) override {
    return expert_ ? expert_->step(pose) : Twist{};
  }

 private:
  RunConfig config_;
  PathLibrary paths_;
  std::optional<ExpertController> expert_;
};

class RandomPolicy final : public EvalPolicy {
 public:
  explicit RandomPolicy(VelocityLimits limits) : limits_(limits) {}
  void begin(const Scene&, const Pose&, std::mt19937_64&) override {}
  Twist act(std::span<const double>, const Pose&, std::mt19937_64& rng) override {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a[2] = {u(rng), u(rng)};
    return to_twist(a, limits_);
  }

 private:
  VelocityLimits limits_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::size_t bucket, long episode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(bucket), static_cast<std::uint32_t>(episode)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

std::unique_ptr<EvalPolicy> make_sac_policy(const SacAgent& agent, VelocityLimits limits) {
  return std::make_unique<SacPolicy>(agent, limits);
}

std::unique_ptr<EvalPolicy> make_expert_policy(const RunConfig& config) {
  return std::make_unique<ExpertPolicy>(config);
}

std::unique_ptr<EvalPolicy> make_random_policy(VelocityLimits limits) {
  return std::make_unique<RandomPolicy>(limits);
}

EvalReport run_eval_sweep(const RunConfig& config, EvalPolicy& policy,
                          const EvalOptions& options) {
  if (options.episodes_per_bucket <= 0) {
    throw Error(ErrorCode::EmptyBucket, "episodes_per_bucket must be > 0");
  }
  if (options.distances.empty()) throw Error(ErrorCode::EmptyBucket, "no distance buckets");
  for (double d : options.distances) {
    if (!(d >= 0.0 && d <= 3.0)) {
      throw Error(ErrorCode::InvalidArgument, "eval distance outside [0, 3]");
    }
  }
  config.validate();
  std::optional<Scene> fixed;
  if (!config.scene_path.empty()) fixed.emplace(load_scene(config.scene_path));
  NavEnv env(config.env, config.footprint);
  std::uniform_real_distribution<double> phi_dist(0.0, kPi);

  EvalReport report;
  for (std::size_t b = 0; b < options.distances.size(); ++b) {
    EvalBucket bucket;
    bucket.distance = options.distances[b];
    long total_steps = 0;
    for (long e = 0; e < options.episodes_per_bucket; ++e) {
      std::mt19937_64 rng(stream_seed(options.seed, b, e));
      const EpisodeScene ep = draw_episode_scene(config, fixed ? &*fixed : nullptr, rng);
      const double phi = phi_dist(rng);
      const Pose start = init_robot(bucket.distance, phi, ep.scene, config.footprint, rng);
      Vector obs = env.reset(ep.scene, start, EpisodeMode::Policy, ep.goal,
                             graph_slot(config, ep, rng));
      policy.begin(ep.scene, start, rng);
      int steps = 0;
      bool success = false;
      for (;;) {
        const StepResult sr = env.step(policy.act(obs, env.state().pose, rng));
        ++steps;
        obs = sr.observation;
        if (sr.terminated || sr.truncated) {
          success = sr.success;
          break;
        }
      }
      ++bucket.episodes;
      bucket.successes += success ? 1 : 0;
      total_steps += steps;
    }
    bucket.mean_length = static_cast<double>(total_steps) / static_cast<double>(bucket.episodes);
    report.buckets.push_back(bucket);
  }
  return report;
}

void write_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "distance,episodes,successes,success_rate,mean_length\n";
  char buf[256];
  for (const auto& b : report.buckets) {
    std::snprintf(buf, sizeof buf, "%.17g,%ld,%ld,%.17g,%.17g\n", b.distance, b.episodes,
                  b.successes, b.success_rate(), b.mean_length);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

EvalReport read_eval_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  EvalReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EvalBucket b;
    double rate = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%ld,%ld,%lf,%lf", &b.distance, &b.episodes, &b.successes,
                    &rate, &b.mean_length) != 5) {
      throw Error(ErrorCode::Io, "malformed eval row in " + path.string() + ": " + line);
    }
    report.buckets.push_back(b);
  }
  return report;
}

}  // namespace sgnav
