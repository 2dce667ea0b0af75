#include "sgnav/scene_gen.hpp"

#include <array>
#include <vector>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

Obstacle box(Vec2 center, Vec2 half, double height, std::string label, std::string color) {
  return Obstacle{Box{center, half}, height, std::move(label), std::move(color)};
}

constexpr double kTableHeight = 0.7;
constexpr double kBowlZ = kTableHeight + 0.04;

Scene simple_scene(std::uint64_t seed) {
  const Bounds bounds{0.0, 0.0, 10.0, 6.0};
  std::vector<Obstacle> obstacles{
      box({7.5, 1.0}, {1.0, 0.4}, kTableHeight, "table", "brown"),
      Obstacle{Circle{{7.5, 2.6}, 0.1}, 1.5, "pole", "red"},
  };
  std::vector<TargetCandidate> targets;
  for (double x : {6.7, 7.1, 7.5, 7.9, 8.3}) {
    targets.push_back({"bowl", {x, 1.3, kBowlZ}, {0.15, 0.15, 0.08}, ""});
  }
  return Scene(bounds, std::move(obstacles), std::move(targets), seed % 5);
}

Scene two_wall_scene(std::uint64_t seed) {
  const Bounds bounds{0.0, 0.0, 8.0, 8.0};
  std::vector<Obstacle> obstacles{
      box({4.0, 0.05}, {2.5, 0.05}, 2.0, "wall", "red"),
      box({4.0, 7.95}, {2.5, 0.05}, 2.0, "wall", "blue"),
      box({4.0, 0.6}, {1.0, 0.4}, kTableHeight, "table", "brown"),
      box({4.0, 7.4}, {1.0, 0.4}, kTableHeight, "table", "brown"),
  };
  std::vector<TargetCandidate> targets;
  for (double x : {3.4, 4.0, 4.6}) {
    targets.push_back({"bowl", {x, 0.9, kBowlZ}, {0.15, 0.15, 0.08}, "bowl near red wall"});
  }
  for (double x : {3.4, 4.0, 4.6}) {
    targets.push_back({"bowl", {x, 7.1, kBowlZ}, {0.15, 0.15, 0.08}, "bowl near blue wall"});
  }
  std::map<std::string, std::string> synonyms{
      {"bowl near red wall", "bowl"},
      {"bowl near blue wall", "bowl"},
  };
  return Scene(bounds, std::move(obstacles), std::move(targets), seed % 6, std::move(synonyms));
}

struct ChairSpot {
  double x, y;
  const char* color;
};

const std::array<std::vector<ChairSpot>, kChairConfigurations>& chair_layouts() {
  static const std::array<std::vector<ChairSpot>, kChairConfigurations> layouts{{
      {},
      {{2.5, 2.2, "red"}},
      {{5.5, 2.2, "black"}},
      {{1.6, 2.0, "red"}, {3.4, 2.0, "black"}},
      {{4.6, 2.0, "black"}, {6.4, 2.0, "red"}},
      {{2.5, 2.4, "black"}, {5.5, 2.4, "red"}},
      {{1.6, 2.0, "red"}, {4.0, 2.5, "black"}, {6.4, 2.0, "red"}},
      {{2.5, 2.2, "black"}, {4.0, 1.6, "red"}, {5.5, 2.2, "black"}},
      {{3.4, 2.0, "red"}, {4.6, 2.0, "black"}, {4.0, 3.2, "red"}},
  }};
  return layouts;
}

Scene random_chairs_scene(std::uint64_t seed) {
  const Bounds bounds{0.0, 0.0, 8.0, 6.0};
  std::vector<Obstacle> obstacles{
      box({2.5, 0.6}, {0.8, 0.4}, kTableHeight, "table", "brown"),
      box({5.5, 0.6}, {0.8, 0.4}, kTableHeight, "table", "brown"),
  };
  for (const auto& c : chair_layouts()[chair_configuration(seed)]) {
    obstacles.push_back(box({c.x, c.y}, {0.25, 0.25}, 0.9, "chair", c.color));
  }
  std::vector<TargetCandidate> targets{
      {"bowl", {2.5, 0.9, kBowlZ}, {0.15, 0.15, 0.08}, ""},
      {"bowl", {5.5, 0.9, kBowlZ}, {0.15, 0.15, 0.08}, ""},
  };
  return Scene(bounds, std::move(obstacles), std::move(targets),
               (seed / kChairConfigurations) % 2);
}

}  // namespace

std::string to_string(SceneFamily family) {
  switch (family) {
    case SceneFamily::Simple: return "SIMPLE";
    case SceneFamily::TwoWall: return "TWO_WALL";
    case SceneFamily::RandomChairs: return "RANDOM_CHAIRS";
  }
  return "unknown";
}

std::optional<SceneFamily> parse_scene_family(std::string_view name) {
  if (name == "simple" || name == "SIMPLE") return SceneFamily::Simple;
  if (name == "two_wall" || name == "TWO_WALL") return SceneFamily::TwoWall;
  if (name == "random_chairs" || name == "RANDOM_CHAIRS") return SceneFamily::RandomChairs;
  return std::nullopt;
}

int chair_configuration(std::uint64_t seed) {
  return static_cast<int>(seed % kChairConfigurations);
}

Scene gen_scene(SceneFamily family, std::uint64_t seed) {
  switch (family) {
    case SceneFamily::Simple: return simple_scene(seed);
    case SceneFamily::TwoWall: return two_wall_scene(seed);
    case SceneFamily::RandomChairs: return random_chairs_scene(seed);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scene family");
}

}  // namespace sgnav
