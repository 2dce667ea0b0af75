#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <vector>

#include "sgnav/environment.hpp"
#include "sgnav/geometry.hpp"

namespace sgnav {

struct CurriculumConfig {
  double r_min = 0.5;
  double r_max = 3.0;
  double r_step = 0.5;
  double phi_max = kPi;
  double phi_step = kPi / 8.0;
  std::size_t window = 30;
  double threshold = 0.85;  // strict: advance when rate > threshold

  void validate() const;
};

struct DifficultyLevel {
  int index = 0;
  double R = 0.0;
  double phi = 0.0;
};

struct CurriculumRecord {
  long episode;
  DifficultyLevel level;
};

/// Difficulty ladder over (R, phi). Only policy episodes count toward the
/// success window; advancing raises phi by one step until phi_max, then
/// resets phi and raises R. The window is cleared after every advancement.
class Curriculum {
 public:
  explicit Curriculum(CurriculumConfig config = {});

  DifficultyLevel start_level() const { return {0, config_.r_min, 0.0}; }
  const DifficultyLevel& current() const { return current_; }
  const std::deque<bool>& window() const { return window_; }
  const std::vector<CurriculumRecord>& history() const { return history_; }
  const CurriculumConfig& config() const { return config_; }

  void record_outcome(bool success, EpisodeMode mode);
  /// At most one advancement per call. Returns whether it advanced.
  bool maybe_advance();
  /// Appends (episode, current level) to the history.
  void log_episode(long episode);

  bool saturated() const;

 private:
  CurriculumConfig config_;
  DifficultyLevel current_;
  std::deque<bool> window_;
  std::vector<CurriculumRecord> history_;
};

/// CSV columns: episode,level_index,R,phi
void write_history_csv(const std::vector<CurriculumRecord>& history,
                       const std::filesystem::path& path);

}  // namespace sgnav
