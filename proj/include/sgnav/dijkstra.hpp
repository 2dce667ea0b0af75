#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgnav/grid.hpp"

namespace sgnav {

/// Length of an 8-connected grid path in cells, kept exact as
/// straight + diagonal * sqrt(2). Ordering is exact (no rounding).
struct PathCost {
  std::int64_t straight = 0;
  std::int64_t diagonal = 0;

  double value() const;
  PathCost operator+(const PathCost& o) const {
    return {straight + o.straight, diagonal + o.diagonal};
  }
  friend bool operator==(const PathCost&, const PathCost&) = default;
  friend std::strong_ordering operator<=>(const PathCost& a, const PathCost& b);
};

struct StoredPath {
  PathCost cost;
  /// Simplified waypoints in meters, from the source cell center to the
  /// target cell center.
  std::vector<Vec2> waypoints;
};

/// Precomputed shortest paths from every admissible cell to each target.
class PathTable {
 public:
  PathTable(GridMap grid, std::vector<Cell> target_cells,
            std::vector<std::vector<std::optional<StoredPath>>> paths);

  const GridMap& grid() const { return grid_; }
  std::size_t num_targets() const { return target_cells_.size(); }
  Cell target_cell(std::size_t target) const { return target_cells_.at(target); }

  /// nullptr when the source is not admissible or cannot reach the target.
  const StoredPath* find(Cell source, std::size_t target) const;

  /// Raw per-target storage, indexed by grid cell index.
  const std::vector<std::optional<StoredPath>>& paths_to(std::size_t target) const {
    return paths_.at(target);
  }

 private:
  GridMap grid_;
  std::vector<Cell> target_cells_;
  std::vector<std::vector<std::optional<StoredPath>>> paths_;
};

inline constexpr double kDefaultConnectionRadius = 1.5;

/// The admissible cell that stands in for a target: the nearest one to its
/// ground projection, if within `connection_radius`. Throws NoTargetCell.
Cell target_cell_for(Vec2 target, const GridMap& grid, double connection_radius);

/// Admissible 8-neighbours of `c`. Diagonal moves require both adjacent
/// orthogonal cells to be admissible (no corner cutting).
void grid_neighbors(const GridMap& grid, Cell c, std::vector<std::pair<Cell, PathCost>>& out);

/// Runs one Dijkstra per target over the 8-connected admissible grid.
/// Unreachable (source, target) pairs are stored as absent.
PathTable dijkstra_all(const GridMap& grid, std::span<const Vec2> targets,
                       double connection_radius = kDefaultConnectionRadius);

/// Drops interior points lying on a straight axis-aligned or 45-degree run
/// between their neighbours. Endpoints are kept; output is a subsequence.
std::vector<Vec2> simplify_path(std::span<const Vec2> waypoints);

}  // namespace sgnav
