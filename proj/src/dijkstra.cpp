#include "sgnav/dijkstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "sgnav/error.hpp"

namespace sgnav {

double PathCost::value() const {
  return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
}

std::strong_ordering operator<=>(const PathCost& a, const PathCost& b) {
  // sign of x + y*sqrt(2) with integers x, y
  const std::int64_t x = a.straight - b.straight;
  const std::int64_t y = a.diagonal - b.diagonal;
  if (x == 0 && y == 0) return std::strong_ordering::equal;
  if (x >= 0 && y >= 0) return std::strong_ordering::greater;
  if (x <= 0 && y <= 0) return std::strong_ordering::less;
  const auto x2 = static_cast<__int128>(x) * x;
  const auto y2 = 2 * static_cast<__int128>(y) * y;
  if (x > 0) return x2 > y2 ? std::strong_ordering::greater : std::strong_ordering::less;
  return y2 > x2 ? std::strong_ordering::greater : std::strong_ordering::less;
}

PathTable::PathTable(GridMap grid, std::vector<Cell> target_cells,
                     std::vector<std::vector<std::optional<StoredPath>>> paths)
    : grid_(std::move(grid)), target_cells_(std::move(target_cells)), paths_(std::move(paths)) {
  if (paths_.size() != target_cells_.size()) {
    throw Error(ErrorCode::InvalidArgument, "path table target count mismatch");
  }
  for (const auto& p : paths_) {
    if (p.size() != grid_.size()) {
      throw Error(ErrorCode::InvalidArgument, "path table cell count mismatch");
    }
  }
}

const StoredPath* PathTable::find(Cell source, std::size_t target) const {
  if (target >= paths_.size() || !grid_.contains(source)) return nullptr;
  const auto& slot = paths_[target][grid_.index(source)];
  return slot ? &*slot : nullptr;
}

Cell target_cell_for(Vec2 target, const GridMap& grid, double connection_radius) {
  const Cell c = nearest_grid_point(target, grid);
  if (distance(grid.center(c), target) > connection_radius) {
    throw Error(ErrorCode::NoTargetCell,
                "no admissible cell within " + std::to_string(connection_radius) +
                    " m of target (" + std::to_string(target.x) + ", " +
                    std::to_string(target.y) + ")");
  }
  return c;
}

void grid_neighbors(const GridMap& grid, Cell c, std::vector<std::pair<Cell, PathCost>>& out) {
  out.clear();
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Cell n{c.row + dr, c.col + dc};
      if (!grid.admissible(n)) continue;
      if (dr != 0 && dc != 0) {
        if (!grid.admissible({c.row + dr, c.col}) || !grid.admissible({c.row, c.col + dc})) {
          continue;
        }
        out.push_back({n, PathCost{0, 1}});
      } else {
        out.push_back({n, PathCost{1, 0}});
      }
    }
  }
}

namespace {

struct SearchResult {
  std::vector<std::optional<PathCost>> cost;
  std::vector<std::int64_t> next;  // successor toward the target
};

SearchResult single_target_dijkstra(const GridMap& grid, Cell target) {
  SearchResult res;
  res.cost.assign(grid.size(), std::nullopt);
  res.next.assign(grid.size(), -1);

  using Entry = std::tuple<PathCost, std::size_t>;
  auto cmp = [](const Entry& a, const Entry& b) { return a > b; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);

  const std::size_t t = grid.index(target);
  res.cost[t] = PathCost{};
  open.push({PathCost{}, t});
  std::vector<std::uint8_t> closed(grid.size(), 0);
  std::vector<std::pair<Cell, PathCost>> nbrs;
  while (!open.empty()) {
    const auto [cost, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    grid_neighbors(grid, grid.cell_at(u), nbrs);
    for (const auto& [n, step] : nbrs) {
      const std::size_t v = grid.index(n);
      if (closed[v]) continue;
      const PathCost cand = cost + step;
      if (!res.cost[v] || cand < *res.cost[v]) {
        res.cost[v] = cand;
        res.next[v] = static_cast<std::int64_t>(u);
        open.push({cand, v});
      }
    }
  }
  return res;
}

enum class Dir : int { Zero, Other, E, NE, N, NW, W, SW, S, SE };

Dir direction(Vec2 a, Vec2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double m = std::max(std::abs(dx), std::abs(dy));
  if (m <= 1e-12) return Dir::Zero;
  const double tol = 1e-9 * m;
  const int sx = std::abs(dx) <= tol ? 0 : (dx > 0 ? 1 : -1);
  const int sy = std::abs(dy) <= tol ? 0 : (dy > 0 ? 1 : -1);
  if (sx != 0 && sy != 0 && std::abs(std::abs(dx) - std::abs(dy)) > tol) return Dir::Other;
  static constexpr Dir table[3][3] = {
      {Dir::SW, Dir::S, Dir::SE},
      {Dir::W, Dir::Zero, Dir::E},
      {Dir::NW, Dir::N, Dir::NE},
  };
  return table[sy + 1][sx + 1];
}

}  // namespace

PathTable dijkstra_all(const GridMap& grid, std::span<const Vec2> targets,
                       double connection_radius) {
  if (grid.admissible_count() == 0) throw Error(ErrorCode::EmptyGrid, "grid has no admissible cell");
  std::vector<Cell> target_cells;
  target_cells.reserve(targets.size());
  for (const Vec2& t : targets) target_cells.push_back(target_cell_for(t, grid, connection_radius));

  std::vector<std::vector<std::optional<StoredPath>>> all;
  all.reserve(targets.size());
  std::vector<Vec2> raw;
  for (const Cell& tc : target_cells) {
    const SearchResult sr = single_target_dijkstra(grid, tc);
    std::vector<std::optional<StoredPath>> per_cell(grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
      if (!sr.cost[s]) continue;
      raw.clear();
      for (std::int64_t u = static_cast<std::int64_t>(s); u >= 0; u = sr.next[u]) {
        raw.push_back(grid.center(grid.cell_at(static_cast<std::size_t>(u))));
      }
      per_cell[s] = StoredPath{*sr.cost[s], simplify_path(raw)};
    }
    all.push_back(std::move(per_cell));
  }
  return PathTable(grid, std::move(target_cells), std::move(all));
}

std::vector<Vec2> simplify_path(std::span<const Vec2> waypoints) {
  std::vector<Vec2> pts;
  pts.reserve(waypoints.size());
  for (const Vec2& p : waypoints) {
    if (pts.empty() || direction(pts.back(), p) != Dir::Zero) pts.push_back(p);
  }
  if (pts.size() <= 2) return pts;

  std::vector<Vec2> out;
  out.reserve(pts.size());
  out.push_back(pts.front());
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Dir in = direction(pts[i - 1], pts[i]);
    const Dir outd = direction(pts[i], pts[i + 1]);
    if (in == outd && in != Dir::Other) continue;
    out.push_back(pts[i]);
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace sgnav
