#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "sgnav/run_config.hpp"
#include "sgnav/sac.hpp"
#include "sgnav/training.hpp"

namespace sgnav {

/// Controller under evaluation. begin() is called once per episode before the
/// first act().
class EvalPolicy {
 public:
  virtual ~EvalPolicy() = default;
  virtual void begin(const Scene& scene, const Pose& start, std::mt19937_64& rng) = 0;
  virtual Twist act(std::span<const double> observation, const Pose& pose,
                    std::mt19937_64& rng) = 0;
};

/// Deterministic (tanh-mean) actions of a trained agent.
std::unique_ptr<EvalPolicy> make_sac_policy(const SacAgent& agent, VelocityLimits limits);
/// The imitation-learning expert; stands still when no path exists.
std::unique_ptr<EvalPolicy> make_expert_policy(const RunConfig& config);
/// Uniform random normalized actions.
std::unique_ptr<EvalPolicy> make_random_policy(VelocityLimits limits);

struct EvalBucket {
  double distance = 0.0;
  long episodes = 0;
  long successes = 0;
  double mean_length = 0.0;

  double success_rate() const {
    return episodes > 0 ? static_cast<double>(successes) / static_cast<double>(episodes) : 0.0;
  }
};

struct EvalReport {
  std::vector<EvalBucket> buckets;
};

struct EvalOptions {
  std::vector<double> distances{0.5, 1.0, 1.5, 2.0, 2.4};
  long episodes_per_bucket = 200;
  std::uint64_t seed = 0;
};

/// POLICY-mode episodes per distance bucket with phi ~ U[0, pi]. Each episode
/// uses its own RNG stream derived from (seed, bucket, episode), so results do
/// not depend on execution order. Throws EmptyBucket for zero episodes and
/// InvalidArgument for distances outside [0, 3].
EvalReport run_eval_sweep(const RunConfig& config, EvalPolicy& policy, const EvalOptions& options);

/// CSV columns: distance,episodes,successes,success_rate,mean_length
void write_eval_csv(const EvalReport& report, const std::filesystem::path& path);
EvalReport read_eval_csv(const std::filesystem::path& path);

}  // namespace sgnav
