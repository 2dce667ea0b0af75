#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sgnav/scene.hpp"

namespace sgnav {

/// The three experiment layouts.
///  - Simple: one table with five bowl slots and a red pole in front of it.
///  - TwoWall: red and blue walls, each with an adjacent table holding three
///    bowl slots; the goal command names the wall color.
///  - RandomChairs: two tables, one bowl, and 0-3 red/black chairs taken from
///    nine fixed arrangements.
enum class SceneFamily { Simple, TwoWall, RandomChairs };

inline constexpr int kChairConfigurations = 9;

std::string to_string(SceneFamily family);
std::optional<SceneFamily> parse_scene_family(std::string_view name);

/// Deterministic in (family, seed). The seed selects the active bowl slot and,
/// for RandomChairs, the chair arrangement (seed % 9).
Scene gen_scene(SceneFamily family, std::uint64_t seed);

/// Chair arrangement index used by gen_scene(RandomChairs, seed).
int chair_configuration(std::uint64_t seed);

}  // namespace sgnav
