#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include "sgnav/graph.hpp"
#include "sgnav/mlp.hpp"
#include "sgnav/replay_buffer.hpp"

namespace sgnav {

struct SacConfig {
  int obs_dim = 0;
  int action_dim = 2;
  int hidden = 64;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double alpha_lr = 3e-4;
  double gamma = 0.99;
  /// Target retention: target <- polyak * target + (1 - polyak) * online.
  double polyak = 0.995;
  double init_alpha = 1.0;
  int batch_size = 128;
  double log_std_min = -5.0;
  double log_std_max = 2.0;

  void validate() const;
  double target_entropy() const { return -static_cast<double>(action_dim); }
};

/// Squashed-Gaussian policy sample for a batch: a = tanh(mu + exp(ls) * eps).
struct PolicySample {
  Matrix mean;
  Matrix raw_log_std;
  Matrix log_std;
  Matrix eps;
  Matrix pre_tanh;
  Matrix action;
  Eigen::RowVectorXd log_prob;
};

struct SacLosses {
  double critic = 0.0;
  double actor = 0.0;
  double alpha_loss = 0.0;
  double alpha = 0.0;
  double mean_q = 0.0;
};

/// Parameter set of the agent: actor, twin critics and their targets, and the
/// log entropy temperature, with optimizer state.
struct SacParams {
  Mlp actor;
  Mlp q1;
  Mlp q2;
  Mlp q1_target;
  Mlp q2_target;
  double log_alpha = 0.0;
  Adam actor_opt;
  Adam q1_opt;
  Adam q2_opt;
  ScalarAdam alpha_opt;
};

/// Soft actor-critic with tanh-squashed Gaussian actions in (-1, 1).
class SacAgent {
 public:
  SacAgent(SacConfig config, std::uint64_t seed);

  /// tanh(mean) when deterministic, else tanh(mean + std * N(0, I)).
  Vector act(std::span<const double> observation, bool deterministic, std::mt19937_64& rng) const;

  /// One gradient step on critics, actor and temperature followed by the
  /// target update. Throws NaNDetected if any loss or parameter goes
  /// non-finite.
  SacLosses update(const Batch& batch);

  const SacConfig& config() const { return config_; }
  SacParams& params() { return params_; }
  const SacParams& params() const { return params_; }
  double alpha() const;
  std::mt19937_64& rng() { return rng_; }
  const std::mt19937_64& rng() const { return rng_; }

 private:
  SacConfig config_;
  SacParams params_;
  std::mt19937_64 rng_;
};

/// Building blocks, exposed for gradient checking.
namespace sac {

PolicySample sample_policy(const Mlp& actor, const Matrix& obs, const Matrix& eps,
                           const SacConfig& config, Mlp::Cache* cache);

Matrix stack(const Matrix& top, const Matrix& bottom);

/// r + gamma * (1 - done) * (min_k Q_k^target(s', a') - alpha * log pi(a'|s'))
ColVector td_target(const SacParams& p, const SacConfig& config, const Batch& batch,
                    const Matrix& next_eps);

/// 0.5 * mean((Q(s, a) - y)^2). Accumulates parameter gradients into `grad`
/// when non-null.
double critic_loss(const Mlp& q, const Batch& batch, const ColVector& target, Mlp* grad,
                   double* mean_q = nullptr);

/// mean(alpha * log pi(a|s) - min_k Q_k(s, a)) with a reparameterized by eps.
/// Critics are held fixed.
double actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2, double alpha,
                  const SacConfig& config, const Matrix& obs, const Matrix& eps, Mlp* grad,
                  Eigen::RowVectorXd* log_prob = nullptr);

/// Synthetic batch: N(0, 1) observations, U(-1, 1) actions, rewards drawn
/// from the reward table, 10% terminal.
Batch random_batch(int obs_dim, int action_dim, Eigen::Index n, std::mt19937_64& rng);

}  // namespace sac

struct GradCheckResult {
  double max_rel_error = 0.0;
  double critic_max = 0.0;
  double actor_max = 0.0;
  std::size_t checked = 0;
};

/// Hook applied to analytic gradients before comparison (negative controls).
using GradientTamper = std::function<void(Mlp& actor_grad, Mlp& q1_grad, Mlp& q2_grad)>;

/// Compares analytic critic and actor gradients with central differences on
/// `num_weights` randomly chosen parameters (split between actor and both
/// critics). Relative error is |g - fd| / max(|g|, |fd|, floor).
GradCheckResult gradient_check(const SacAgent& agent, const Batch& batch, std::mt19937_64& rng,
                               std::size_t num_weights = 200, double h = 1e-5,
                               const GradientTamper& tamper = {});

}  // namespace sgnav
