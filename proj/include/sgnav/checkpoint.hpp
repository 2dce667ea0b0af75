#pragma once

#include <filesystem>

#include "sgnav/run_config.hpp"
#include "sgnav/sac.hpp"

namespace sgnav {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything needed to resume or evaluate a run: the run config, all network
/// weights, optimizer state and the agent RNG state.
struct Checkpoint {
  RunConfig config;
  SacAgent agent;
  long env_steps = 0;
  long episodes = 0;
};

/// Binary layout (host byte order): magic "SGNCKPT1", u32 version, config
/// JSON string, counters, networks, optimizers, log temperature, RNG state.
void save_checkpoint(const RunConfig& config, const SacAgent& agent, long env_steps,
                     long episodes, const std::filesystem::path& path);

/// Throws Error(Io) for unreadable or corrupt files, Error(Config) for an
/// invalid embedded config.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sgnav
