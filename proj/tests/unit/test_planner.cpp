#include <algorithm>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sgnav/dijkstra.hpp"
#include "sgnav/error.hpp"
#include "sgnav/grid.hpp"
#include "sgnav/path_cache.hpp"
#include "sgnav/pure_pursuit.hpp"
#include "sgnav/scene_gen.hpp"

using namespace sgnav;

namespace {

GridMap open_grid(int rows, int cols) {
  return GridMap({0.0, 0.0}, 0.1, rows, cols, std::vector<std::uint8_t>(rows * cols, 1));
}

}  // namespace

TEST_CASE("path cost ordering is exact") {
  CHECK(PathCost{0, 1} > PathCost{1, 0});
  CHECK(PathCost{0, 1} < PathCost{2, 0});
  CHECK(PathCost{7, 0} < PathCost{0, 5});   // 7 < 7.07
  CHECK(PathCost{0, 5} < PathCost{8, 0});
  CHECK(PathCost{3, 2} == PathCost{3, 2});
  CHECK(PathCost{1, 2}.value() == doctest::Approx(1 + 2 * std::sqrt(2.0)));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 200);
  for (int i = 0; i < 5000; ++i) {
    const PathCost a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const long double va = oracle::cost_value(a), vb = oracle::cost_value(b);
    if (va < vb) CHECK(a < b);
    if (va > vb) CHECK(a > b);
  }
}

TEST_CASE("build_grid marks admissible cell centers") {
  const Scene s = gen_scene(SceneFamily::Simple, 0);
  const RobotFootprint fp{0.3};
  const GridMap g = build_grid(s, fp, 0.1);
  CHECK(g.cols() == 100);
  CHECK(g.rows() == 60);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const Vec2 c = g.center(g.cell_at(i));
    CHECK((g.mask()[i] != 0) == admissible({c.x, c.y, 0.0}, fp, s));
  }
  CHECK_THROWS_AS(build_grid(s, RobotFootprint{5.0}, 0.1), Error);
}

TEST_CASE("nearest grid point matches exhaustive scan") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.3, 1.6);
  for (int k = 0; k < 100; ++k) {
    const GridMap g = oracle::random_grid(rng, 12, 0.5);
    for (int i = 0; i < 50; ++i) {
      const Vec2 p{u(rng), u(rng)};
      const Cell got = nearest_grid_point(p, g);
      const auto want = oracle::nearest_scan(g, p);
      REQUIRE(want);
      CHECK(got == *want);
    }
    // points on cell corners produce ties
    for (int r = 0; r <= g.rows(); ++r) {
      const Vec2 p{0.1 * (r % (g.cols() + 1)), 0.1 * r};
      CHECK(nearest_grid_point(p, g) == *oracle::nearest_scan(g, p));
    }
  }
}

TEST_CASE("dijkstra on an open grid") {
  const GridMap g = open_grid(5, 5);
  const Vec2 target = g.center({0, 0});
  const PathTable t = dijkstra_all(g, std::span<const Vec2>(&target, 1));
  const StoredPath* p = t.find({4, 4}, 0);
  REQUIRE(p);
  CHECK(p->cost == PathCost{0, 4});
  CHECK(p->waypoints.size() == 2);  // one straight diagonal run
  const StoredPath* q = t.find({4, 1}, 0);
  REQUIRE(q);
  CHECK(q->cost == PathCost{3, 1});
  CHECK(t.find({0, 0}, 0)->cost == PathCost{});
}

TEST_CASE("no corner cutting around a blocked cell") {
  // . #
  // . .   moving (0,0) -> (1,1) diagonally would clip the blocked corner
  GridMap g({0.0, 0.0}, 0.1, 2, 2, {1, 0, 1, 1});
  std::vector<std::pair<Cell, PathCost>> n;
  grid_neighbors(g, {0, 0}, n);
  CHECK(n.size() == 1);
  const Vec2 target = g.center({1, 1});
  const PathTable t = dijkstra_all(g, std::span<const Vec2>(&target, 1));
  CHECK(t.find({0, 0}, 0)->cost == PathCost{2, 0});
}

TEST_CASE("unreachable cells and targets") {
  // two components separated by a wall column
  GridMap g({0.0, 0.0}, 0.1, 3, 3, {1, 0, 1, 1, 0, 1, 1, 0, 1});
  const Vec2 target = g.center({0, 0});
  const PathTable t = dijkstra_all(g, std::span<const Vec2>(&target, 1));
  CHECK(t.find({0, 2}, 0) == nullptr);
  CHECK(t.find({0, 1}, 0) == nullptr);
  CHECK(t.find({2, 0}, 0) != nullptr);
  const Vec2 far{5.0, 5.0};
  CHECK_THROWS_AS(dijkstra_all(g, std::span<const Vec2>(&far, 1)), Error);
  try {
    dijkstra_all(g, std::span<const Vec2>(&far, 1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoTargetCell);
  }
}

TEST_CASE("dijkstra costs equal the Bellman-Ford oracle") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const GridMap g = oracle::random_grid(rng, 10, 0.3);
    const Vec2 target = g.center({0, 0});
    const PathTable t = dijkstra_all(g, std::span<const Vec2>(&target, 1), 0.01);
    const auto want = oracle::bellman_ford(g, {0, 0});
    for (std::size_t i = 0; i < g.size(); ++i) {
      const StoredPath* p = t.find(g.cell_at(i), 0);
      REQUIRE((p != nullptr) == want[i].has_value());
      if (p) CHECK(p->cost == *want[i]);
    }
  }
}

TEST_CASE("stored paths start at the source and end at the target") {
  const Scene s = gen_scene(SceneFamily::Simple, 2);
  const GridMap g = build_grid(s, {0.45}, 0.1);
  std::vector<Vec2> targets;
  for (const auto& t : s.targets()) targets.push_back(t.position.xy());
  const PathTable t = dijkstra_all(g, targets);
  CHECK(t.num_targets() == 5);
  for (std::size_t i = 0; i < g.size(); i += 37) {
    const StoredPath* p = t.find(g.cell_at(i), 2);
    if (!p) continue;
    CHECK(p->waypoints.front() == g.center(g.cell_at(i)));
    CHECK(p->waypoints.back() == g.center(t.target_cell(2)));
  }
}

TEST_CASE("simplify_path examples") {
  const std::vector<Vec2> straight{{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0}};
  CHECK(simplify_path(straight) == std::vector<Vec2>{{0, 0}, {0.3, 0}});
  const std::vector<Vec2> bend{{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0.1}, {0.4, 0.2}};
  CHECK(simplify_path(bend) == std::vector<Vec2>{{0, 0}, {0.2, 0}, {0.4, 0.2}});
  const std::vector<Vec2> single{{1, 1}};
  CHECK(simplify_path(single).size() == 1);
  const std::vector<Vec2> dup{{1, 1}, {1, 1}, {1.1, 1}};
  CHECK(simplify_path(dup) == std::vector<Vec2>{{1, 1}, {1.1, 1}});
}

TEST_CASE("path cache round trip and key mismatch") {
  const Scene s = gen_scene(SceneFamily::RandomChairs, 4);
  const auto dir = std::filesystem::temp_directory_path() / "sgnav_cache_test";
  std::filesystem::remove_all(dir);
  const RobotFootprint fp{0.45};
  const PathTable built = load_or_build_paths(s, fp, 0.1, dir);
  const PathTable cached = load_or_build_paths(s, fp, 0.1, dir);
  REQUIRE(built.grid().mask() == cached.grid().mask());
  for (std::size_t t = 0; t < built.num_targets(); ++t) {
    CHECK(built.target_cell(t) == cached.target_cell(t));
    for (std::size_t i = 0; i < built.grid().size(); ++i) {
      const auto& a = built.paths_to(t)[i];
      const auto& b = cached.paths_to(t)[i];
      REQUIRE(a.has_value() == b.has_value());
      if (a) {
        CHECK(a->cost == b->cost);
        CHECK(a->waypoints == b->waypoints);
      }
    }
  }
  const PathCacheKey key{s.geometry_hash(), 0.1, 0.45};
  std::filesystem::path file;
  for (const auto& e : std::filesystem::directory_iterator(dir)) file = e.path();
  CHECK(load_path_cache(key, file).has_value());
  CHECK_FALSE(load_path_cache({key.scene_hash, 0.2, 0.45}, file).has_value());
  CHECK_FALSE(load_path_cache({key.scene_hash ^ 1, 0.1, 0.45}, file).has_value());
  CHECK_FALSE(load_path_cache(key, dir / "missing.bin").has_value());
  std::filesystem::resize_file(file, 100);
  CHECK_FALSE(load_path_cache(key, file).has_value());
}

TEST_CASE("pure pursuit step geometry") {
  const PurePursuitConfig cfg{0.6, 0.5, 0.15};
  const VelocityLimits lim{1.0, 1.5};
  const std::vector<Vec2> path{{0, 0}, {2, 0}};
  // on the line heading along it: no turning
  Twist t = pure_pursuit_step({0.0, 0.0, 0.0}, path, cfg, lim);
  CHECK(t.v == doctest::Approx(0.5));
  CHECK(t.w == doctest::Approx(0.0));
  // offset to the right of the path: lookahead point lies to the left
  t = pure_pursuit_step({0.0, -0.2, 0.0}, path, cfg, lim);
  CHECK(t.w > 0.0);
  // curvature 2 y / L^2 with the lookahead point at (0.6, 0) in the robot frame
  const std::vector<Vec2> ahead{{0.0, 0.0}, {0.6, 0.3}};
  t = pure_pursuit_step({0.0, 0.0, 0.0}, ahead, cfg, lim);
  const double L2 = 0.6 * 0.6 + 0.3 * 0.3;
  CHECK(t.w == doctest::Approx(std::min(0.5 * 2 * 0.3 / L2, 1.5)));
  // at the final waypoint
  const std::vector<Vec2> end{{0, 0}};
  t = pure_pursuit_step({0.0, 0.0, 0.0}, end, cfg, lim);
  CHECK(t.v == 0.0);
  CHECK(t.w == 0.0);
  CHECK_THROWS_AS(PurePursuitConfig({0.05, 0.5, 0.15}).validate(0.1), Error);
}

TEST_CASE("densify bounds the spacing and keeps vertices") {
  const std::vector<Vec2> path{{0, 0}, {1, 0}, {1, 0.35}};
  const auto d = densify(path, 0.1);
  CHECK(d.front() == path.front());
  CHECK(d.back() == path.back());
  for (std::size_t i = 0; i + 1 < d.size(); ++i) CHECK(distance(d[i], d[i + 1]) <= 0.1 + 1e-12);
  CHECK(std::find(d.begin(), d.end(), Vec2{1, 0}) != d.end());
}

TEST_CASE("pure pursuit lateral target: w = 2 v / L") {
  const PurePursuitConfig cfg{0.6, 0.5, 0.15};
  const VelocityLimits wide{1.0, 10.0};
  const std::vector<Vec2> path{{0, 0}, {0, 0.6}};
  const Twist t = pure_pursuit_step({0.0, 0.0, 0.0}, path, cfg, wide);
  CHECK(t.v == doctest::Approx(0.5));
  CHECK(t.w == doctest::Approx(2 * 0.5 / 0.6));
}

TEST_CASE("corridor path length equals the cell count") {
  GridMap g({0.0, 0.0}, 0.5, 1, 9, std::vector<std::uint8_t>(9, 1));
  const Vec2 target = g.center({0, 8});
  const PathTable t = dijkstra_all(g, std::span<const Vec2>(&target, 1));
  CHECK(t.find({0, 0}, 0)->cost == PathCost{8, 0});
  CHECK(t.find({0, 0}, 0)->waypoints.size() == 2);
  CHECK(t.find({0, 8}, 0)->waypoints.size() == 1);
}

TEST_CASE("L-shaped path keeps its corner") {
  const std::vector<Vec2> l{{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0}, {0.3, 0.1}, {0.3, 0.2}, {0.3, 0.3}};
  CHECK(simplify_path(l) == std::vector<Vec2>{{0, 0}, {0.3, 0}, {0.3, 0.3}});
}

TEST_CASE("grid over a room with a central box matches per-cell recomputation") {
  std::vector<Obstacle> obs{{Box{{2.0, 2.0}, {0.5, 0.5}}, 1.0, "box", ""}};
  std::vector<TargetCandidate> t{{"bowl", {0.5, 0.5, 0.5}, {0.15, 0.15, 0.08}, ""}};
  const Scene s({0, 0, 4, 4}, obs, t, 0);
  const GridMap g = build_grid(s, {0.3}, 0.5);
  CHECK(g.rows() == 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 c = g.center(g.cell_at(i));
    CHECK((g.mask()[i] != 0) == admissible({c.x, c.y, 0}, {0.3}, s));
  }
  const Scene empty({0, 0, 4, 4}, {}, t, 0);
  const GridMap e = build_grid(empty, {0.3}, 1.0);
  CHECK(e.admissible_count() == 16);
}
