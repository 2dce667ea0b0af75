#include "sgnav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgnav/error.hpp"

namespace sgnav {

GridMap::GridMap(Vec2 origin, double resolution, int rows, int cols,
                 std::vector<std::uint8_t> mask)
    : origin_(origin), resolution_(resolution), rows_(rows), cols_(cols), mask_(std::move(mask)) {
  if (!(resolution_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid resolution must be > 0");
  if (rows_ < 0 || cols_ < 0 ||
      mask_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    throw Error(ErrorCode::InvalidArgument, "grid mask size does not match rows*cols");
  }
}

std::size_t GridMap::admissible_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

GridMap build_grid(const Scene& scene, const RobotFootprint& footprint, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid resolution must be > 0");
  const auto& b = scene.bounds();
  const int cols = static_cast<int>(std::floor(b.width() / resolution + 1e-9));
  const int rows = static_cast<int>(std::floor(b.height() / resolution + 1e-9));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(std::max(rows, 0)) *
                                 static_cast<std::size_t>(std::max(cols, 0)));
  GridMap probe({b.min_x, b.min_y}, resolution, std::max(rows, 0), std::max(cols, 0), mask);
  bool any = false;
  for (int r = 0; r < probe.rows(); ++r) {
    for (int c = 0; c < probe.cols(); ++c) {
      const Vec2 p = probe.center({r, c});
      const bool ok = admissible(Pose{p.x, p.y, 0.0}, footprint, scene);
      mask[probe.index({r, c})] = ok ? 1 : 0;
      any = any || ok;
    }
  }
  if (!any) throw Error(ErrorCode::EmptyGrid, "no admissible grid cell in scene");
  return GridMap({b.min_x, b.min_y}, resolution, probe.rows(), probe.cols(), std::move(mask));
}

Cell nearest_grid_point(Vec2 p, const GridMap& grid) {
  const double res = grid.resolution();
  const double fx = (p.x - grid.origin().x) / res;
  const double fy = (p.y - grid.origin().y) / res;

  double best = std::numeric_limits<double>::infinity();
  Cell best_cell{-1, -1};
  auto consider = [&](Cell c) {
    if (!grid.admissible(c)) return;
    const Vec2 q = grid.center(c);
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best || (d2 == best && c < best_cell)) {
      best = d2;
      best_cell = c;
    }
  };

  const bool inside = fx >= 0.0 && fy >= 0.0 && fx < grid.cols() && fy < grid.rows();
  if (!inside) {
    for (std::size_t i = 0; i < grid.size(); ++i) consider(grid.cell_at(i));
  } else {
    // Ring search around the containing cell. Cells on Chebyshev ring k are at
    // least (k - 0.5) * res away along one axis.
    const int r0 = static_cast<int>(fy);
    const int c0 = static_cast<int>(fx);
    const int max_ring = std::max(grid.rows(), grid.cols());
    for (int k = 0; k <= max_ring; ++k) {
      const double lb = k == 0 ? 0.0 : (k - 0.5) * res;
      if (lb * lb > best) break;
      if (k == 0) {
        consider({r0, c0});
        continue;
      }
      for (int dc = -k; dc <= k; ++dc) {
        consider({r0 - k, c0 + dc});
        consider({r0 + k, c0 + dc});
      }
      for (int dr = -k + 1; dr <= k - 1; ++dr) {
        consider({r0 + dr, c0 - k});
        consider({r0 + dr, c0 + k});
      }
    }
  }
  if (best_cell.row < 0) throw Error(ErrorCode::EmptyGrid, "grid has no admissible cell");
  return best_cell;
}

}  // namespace sgnav
