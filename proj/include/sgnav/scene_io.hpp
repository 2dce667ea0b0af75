#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sgnav/scene.hpp"

namespace sgnav {

inline constexpr int kSceneFormatVersion = 1;

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

}  // namespace sgnav
