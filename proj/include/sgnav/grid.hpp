#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sgnav/geometry.hpp"
#include "sgnav/scene.hpp"

namespace sgnav {

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Discretized set of admissible robot positions. Cell (r, c) has its center
/// at origin + ((c + 0.5) * resolution, (r + 0.5) * resolution).
class GridMap {
 public:
  GridMap(Vec2 origin, double resolution, int rows, int cols, std::vector<std::uint8_t> mask);

  Vec2 origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return mask_.size(); }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }
  bool admissible(Cell c) const { return contains(c) && mask_[index(c)] != 0; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(cols_)),
            static_cast<int>(index % static_cast<std::size_t>(cols_))};
  }
  Vec2 center(Cell c) const {
    return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
  }
  std::size_t admissible_count() const;

 private:
  Vec2 origin_;
  double resolution_;
  int rows_;
  int cols_;
  std::vector<std::uint8_t> mask_;
};

/// Marks each cell whose center is admissible for `footprint`.
/// Throws Error(EmptyGrid) when no cell qualifies.
GridMap build_grid(const Scene& scene, const RobotFootprint& footprint, double resolution);

/// Admissible cell closest to `p`; ties go to the lexicographically smallest
/// (row, col).
Cell nearest_grid_point(Vec2 p, const GridMap& grid);
inline Cell nearest_grid_point(const Pose& pose, const GridMap& grid) {
  return nearest_grid_point(pose.position(), grid);
}

}  // namespace sgnav
