#pragma once
// Reference implementations used only by tests. They share no code with the
// library beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "sgnav/dijkstra.hpp"
#include "sgnav/grid.hpp"
#include "sgnav/scene.hpp"

namespace oracle {

using sgnav::Cell;
using sgnav::GridMap;
using sgnav::PathCost;
using sgnav::Vec2;

// Exact path length as the pair (straight, diagonal); compared through long
// double with a margin far below the smallest gap between distinct values on
// small grids.
inline long double cost_value(PathCost c) {
  return static_cast<long double>(c.straight) +
         static_cast<long double>(c.diagonal) * std::sqrt(2.0L);
}

// Bellman-Ford from `target` on the 8-connected grid without corner cutting.
// Returns the optimal cost per cell, nullopt when unreachable.
inline std::vector<std::optional<PathCost>> bellman_ford(const GridMap& g, Cell target) {
  const int rows = g.rows();
  const int cols = g.cols();
  auto ok = [&](int r, int c) {
    return r >= 0 && r < rows && c >= 0 && c < cols &&
           g.mask()[static_cast<std::size_t>(r * cols + c)] != 0;
  };
  std::vector<std::optional<PathCost>> best(static_cast<std::size_t>(rows * cols));
  best[static_cast<std::size_t>(target.row * cols + target.col)] = PathCost{0, 0};
  for (int iter = 0; iter < rows * cols; ++iter) {
    bool changed = false;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const auto& from = best[static_cast<std::size_t>(r * cols + c)];
        if (!from) continue;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if ((dr == 0 && dc == 0) || !ok(r + dr, c + dc)) continue;
            PathCost step{1, 0};
            if (dr != 0 && dc != 0) {
              if (!ok(r + dr, c) || !ok(r, c + dc)) continue;
              step = PathCost{0, 1};
            }
            const PathCost cand{from->straight + step.straight, from->diagonal + step.diagonal};
            auto& to = best[static_cast<std::size_t>((r + dr) * cols + c + dc)];
            if (!to || cost_value(cand) < cost_value(*to) - 1e-12L) {
              to = cand;
              changed = true;
            }
          }
        }
      }
    }
    if (!changed) break;
  }
  return best;
}

// Nearest admissible cell center by full scan; ties to the smallest (row, col).
inline std::optional<Cell> nearest_scan(const GridMap& g, Vec2 p) {
  std::optional<Cell> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (!g.admissible({r, c})) continue;
      const Vec2 ctr = g.center({r, c});
      const double d = (ctr.x - p.x) * (ctr.x - p.x) + (ctr.y - p.y) * (ctr.y - p.y);
      if (d < best_d) {
        best_d = d;
        best = Cell{r, c};
      }
    }
  }
  return best;
}

// Distance from a point to a box by clamping into the box.
inline double box_distance(Vec2 p, const sgnav::Box& b) {
  const double cx = std::clamp(p.x, b.center.x - b.half_extent.x, b.center.x + b.half_extent.x);
  const double cy = std::clamp(p.y, b.center.y - b.half_extent.y, b.center.y + b.half_extent.y);
  return std::hypot(p.x - cx, p.y - cy);
}

inline GridMap random_grid(std::mt19937_64& rng, int max_side, double fill) {
  std::uniform_int_distribution<int> side(2, max_side);
  std::bernoulli_distribution blocked(fill);
  const int rows = side(rng);
  const int cols = side(rng);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(rows * cols));
  for (auto& m : mask) m = blocked(rng) ? 0 : 1;
  mask[0] = 1;
  return GridMap({0.0, 0.0}, 0.1, rows, cols, std::move(mask));
}

// Distance from p to segment ab.
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double polyline_distance(Vec2 p, const std::vector<Vec2>& line) {
  if (line.size() == 1) return std::hypot(p.x - line[0].x, p.y - line[0].y);
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    d = std::min(d, segment_distance(p, line[i], line[i + 1]));
  }
  return d;
}

// Random scene of axis-aligned boxes and circles with a single target, all
// inside a 6 x 6 m room.
inline sgnav::Scene random_scene(std::mt19937_64& rng, int obstacles) {
  std::uniform_real_distribution<double> pos(1.0, 5.0);
  std::uniform_real_distribution<double> half(0.1, 0.5);
  std::bernoulli_distribution is_box(0.6);
  std::vector<sgnav::Obstacle> obs;
  for (int i = 0; i < obstacles; ++i) {
    sgnav::Obstacle o;
    if (is_box(rng)) {
      o.shape = sgnav::Box{{pos(rng), pos(rng)}, {half(rng), half(rng)}};
      o.label = "box";
    } else {
      o.shape = sgnav::Circle{{pos(rng), pos(rng)}, half(rng)};
      o.label = "pillar";
    }
    o.height = 1.0;
    o.color = i % 2 ? "red" : "blue";
    obs.push_back(o);
  }
  std::vector<sgnav::TargetCandidate> targets{{"bowl", {pos(rng), pos(rng), 0.7}, {0.15, 0.15, 0.08}, ""}};
  return sgnav::Scene({0.0, 0.0, 6.0, 6.0}, std::move(obs), std::move(targets), 0);
}

}  // namespace oracle
