#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "sgnav/dijkstra.hpp"
#include "sgnav/scene.hpp"

namespace sgnav {

/// Key identifying a path table: scene geometry, grid resolution and the
/// planning footprint.
struct PathCacheKey {
  std::uint64_t scene_hash = 0;
  double resolution = 0.0;
  double footprint_radius = 0.0;

  friend bool operator==(const PathCacheKey&, const PathCacheKey&) = default;
};

void save_path_cache(const PathTable& table, const PathCacheKey& key,
                     const std::filesystem::path& file);

/// Returns nullopt when the file is missing or was written for another key.
std::optional<PathTable> load_path_cache(const PathCacheKey& key,
                                         const std::filesystem::path& file);

/// Builds grid + path table for every target slot of `scene`, reusing
/// `cache_dir/paths-<hash>.bin` when it matches. Empty cache_dir disables the
/// file cache.
PathTable load_or_build_paths(const Scene& scene, const RobotFootprint& footprint,
                              double resolution, const std::filesystem::path& cache_dir);

}  // namespace sgnav
