#include "sgnav/scene_io.hpp"

#include <fstream>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

using nlohmann::json;

json vec(Vec2 v) { return json::array({v.x, v.y}); }
json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec2 read_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::Config, std::string(what) + " must be a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vec3 read_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::Config, std::string(what) + " must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::Config, std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

json scene_to_json(const Scene& scene) {
  json j;
  j["version"] = kSceneFormatVersion;
  const auto& b = scene.bounds();
  j["bounds"] = {{"min", vec(Vec2{b.min_x, b.min_y})}, {"max", vec(Vec2{b.max_x, b.max_y})}};
  json obstacles = json::array();
  for (const auto& o : scene.obstacles()) {
    json jo;
    if (const auto* box = std::get_if<Box>(&o.shape)) {
      jo["shape"] = "box";
      jo["center"] = vec(box->center);
      jo["half_extents"] = vec(box->half_extent);
    } else {
      const auto& c = std::get<Circle>(o.shape);
      jo["shape"] = "circle";
      jo["center"] = vec(c.center);
      jo["radius"] = c.radius;
    }
    jo["height"] = o.height;
    jo["label"] = o.label;
    jo["color"] = o.color;
    obstacles.push_back(std::move(jo));
  }
  j["obstacles"] = std::move(obstacles);
  json targets = json::array();
  for (const auto& t : scene.targets()) {
    json jt{{"label", t.label}, {"position", vec(t.position)}, {"extent", vec(t.extent)}};
    if (!t.goal_text.empty()) jt["goal_text"] = t.goal_text;
    targets.push_back(std::move(jt));
  }
  j["targets"] = std::move(targets);
  j["active_target"] = scene.active_target();
  if (!scene.synonyms().empty()) j["synonyms"] = scene.synonyms();
  return j;
}

Scene scene_from_json(const json& j) {
  try {
    const int version = require(j, "version").get<int>();
    if (version != kSceneFormatVersion) {
      throw Error(ErrorCode::Config, "unsupported scene format version " + std::to_string(version));
    }
    const auto& jb = require(j, "bounds");
    const Vec2 lo = read_vec2(require(jb, "min"), "bounds.min");
    const Vec2 hi = read_vec2(require(jb, "max"), "bounds.max");
    Bounds bounds{lo.x, lo.y, hi.x, hi.y};

    std::vector<Obstacle> obstacles;
    if (auto it = j.find("obstacles"); it != j.end()) {
      for (const auto& jo : *it) {
        Obstacle o;
        const auto shape = require(jo, "shape").get<std::string>();
        const Vec2 center = read_vec2(require(jo, "center"), "obstacle.center");
        if (shape == "box") {
          o.shape = Box{center, read_vec2(require(jo, "half_extents"), "obstacle.half_extents")};
        } else if (shape == "circle") {
          o.shape = Circle{center, require(jo, "radius").get<double>()};
        } else {
          throw Error(ErrorCode::Config, "unknown obstacle shape '" + shape + "'");
        }
        o.height = jo.value("height", 1.0);
        o.label = require(jo, "label").get<std::string>();
        o.color = jo.value("color", std::string{});
        obstacles.push_back(std::move(o));
      }
    }

    std::vector<TargetCandidate> targets;
    for (const auto& jt : require(j, "targets")) {
      TargetCandidate t;
      t.label = require(jt, "label").get<std::string>();
      t.position = read_vec3(require(jt, "position"), "target.position");
      if (auto it = jt.find("extent"); it != jt.end()) t.extent = read_vec3(*it, "target.extent");
      t.goal_text = jt.value("goal_text", std::string{});
      targets.push_back(std::move(t));
    }
    std::map<std::string, std::string> synonyms;
    if (auto it = j.find("synonyms"); it != j.end()) {
      synonyms = it->get<std::map<std::string, std::string>>();
    }
    return Scene(bounds, std::move(obstacles), std::move(targets),
                 j.value("active_target", std::size_t{0}), std::move(synonyms));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed scene: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scene file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, path.string() + ": " + e.what());
  }
  return scene_from_json(j);
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write scene file " + path.string());
  out << scene_to_json(scene).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace sgnav
