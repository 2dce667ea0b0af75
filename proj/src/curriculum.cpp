#include "sgnav/curriculum.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {
constexpr double kEps = 1e-9;
}

void CurriculumConfig::validate() const {
  if (!(r_min >= 0.0) || !(r_max >= r_min) || r_max > 3.0) {
    throw Error(ErrorCode::Config, "curriculum requires 0 <= r_min <= r_max <= 3");
  }
  if (!(r_step > 0.0) || !(phi_step > 0.0)) {
    throw Error(ErrorCode::Config, "curriculum steps must be > 0");
  }
  if (!(phi_max >= 0.0) || phi_max > kPi) throw Error(ErrorCode::Config, "phi_max must lie in [0, pi]");
  if (window == 0) throw Error(ErrorCode::Config, "curriculum window must be > 0");
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::Config, "curriculum threshold must lie in [0, 1)");
  }
}

Curriculum::Curriculum(CurriculumConfig config) : config_(config) {
  config_.validate();
  current_ = start_level();
}

void Curriculum::record_outcome(bool success, EpisodeMode mode) {
  if (mode == EpisodeMode::Control) return;
  window_.push_back(success);
  while (window_.size() > config_.window) window_.pop_front();
}

bool Curriculum::saturated() const {
  return current_.phi >= config_.phi_max - kEps && current_.R >= config_.r_max - kEps;
}

bool Curriculum::maybe_advance() {
  if (window_.size() < config_.window || saturated()) return false;
  const auto wins = std::count(window_.begin(), window_.end(), true);
  const double rate = static_cast<double>(wins) / static_cast<double>(window_.size());
  if (!(rate > config_.threshold)) return false;

  if (current_.phi < config_.phi_max - kEps) {
    current_.phi = std::min(current_.phi + config_.phi_step, config_.phi_max);
    if (current_.phi > config_.phi_max - kEps) current_.phi = config_.phi_max;
  } else {
    current_.phi = 0.0;
    current_.R = std::min(current_.R + config_.r_step, config_.r_max);
  }
  ++current_.index;
  window_.clear();
  return true;
}

void Curriculum::log_episode(long episode) { history_.push_back({episode, current_}); }

void write_history_csv(const std::vector<CurriculumRecord>& history,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "episode,level_index,R,phi\n";
  char buf[128];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof buf, "%ld,%d,%.17g,%.17g\n", h.episode, h.level.index, h.level.R,
                  h.level.phi);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace sgnav
