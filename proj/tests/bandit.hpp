#pragma once

#include <cstdint>
#include <random>

#include "sgnav/replay_buffer.hpp"
#include "sgnav/sac.hpp"

namespace bandit {

// Single state, one action dimension, reward -(a - 0.5)^2, every step
// terminal. Transitions come from the current stochastic policy.
struct Result {
  double action = 0.0;  // deterministic action after training
  double alpha = 0.0;
};

inline sgnav::SacConfig config() {
  sgnav::SacConfig c;
  c.obs_dim = 1;
  c.action_dim = 1;
  c.batch_size = 128;
  // the temperature must fall well below its initial value within the
  // budget, or the entropy bonus biases the squashed mean toward zero
  c.actor_lr = 1e-3;
  c.critic_lr = 1e-3;
  c.alpha_lr = 1e-3;
  return c;
}

inline Result run(const sgnav::SacConfig& cfg, std::uint64_t seed, int updates = 2000) {
  sgnav::SacAgent agent(cfg, seed);
  sgnav::ReplayBuffer buffer(100000, 1, 1);
  std::mt19937_64 rng(seed + 17);
  const sgnav::Vector obs{1.0};
  auto collect = [&](bool random) {
    sgnav::Vector a = random ? sgnav::Vector{std::uniform_real_distribution<double>(-1, 1)(rng)}
                             : agent.act(obs, false, rng);
    const double r = -(a[0] - 0.5) * (a[0] - 0.5);
    buffer.push({obs, a, r, obs, true});
  };
  for (int i = 0; i < cfg.batch_size; ++i) collect(true);
  for (int i = 0; i < updates; ++i) {
    collect(false);
    agent.update(buffer.sample(static_cast<std::size_t>(cfg.batch_size), agent.rng()));
  }
  return {agent.act(obs, true, rng)[0], agent.alpha()};
}

}  // namespace bandit
