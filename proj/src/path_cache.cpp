#include "sgnav/path_cache.hpp"

#include <cstdio>
#include <fstream>

#include "sgnav/binary_io.hpp"
#include "sgnav/error.hpp"

namespace sgnav {
namespace {

constexpr char kMagic[8] = {'S', 'G', 'N', 'P', 'A', 'T', 'H', '1'};

}  // namespace

void save_path_cache(const PathTable& table, const PathCacheKey& key,
                     const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write path cache " + file.string());
  BinaryWriter w(out);
  out.write(kMagic, sizeof kMagic);
  w.put(key.scene_hash);
  w.put(key.resolution);
  w.put(key.footprint_radius);

  const GridMap& g = table.grid();
  w.put(g.origin().x);
  w.put(g.origin().y);
  w.put<std::int32_t>(g.rows());
  w.put<std::int32_t>(g.cols());
  w.put_array(g.mask().data(), g.mask().size());

  w.put<std::uint64_t>(table.num_targets());
  for (std::size_t t = 0; t < table.num_targets(); ++t) {
    const Cell c = table.target_cell(t);
    w.put<std::int32_t>(c.row);
    w.put<std::int32_t>(c.col);
    for (const auto& slot : table.paths_to(t)) {
      w.put<std::uint8_t>(slot ? 1 : 0);
      if (!slot) continue;
      w.put(slot->cost.straight);
      w.put(slot->cost.diagonal);
      w.put_array(slot->waypoints.data(), slot->waypoints.size());
    }
  }
  w.check();
}

std::optional<PathTable> load_path_cache(const PathCacheKey& key,
                                         const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  try {
    BinaryReader r(in);
    PathCacheKey stored;
    stored.scene_hash = r.get<std::uint64_t>();
    stored.resolution = r.get<double>();
    stored.footprint_radius = r.get<double>();
    if (!(stored == key)) return std::nullopt;

    const double ox = r.get<double>();
    const double oy = r.get<double>();
    const int rows = r.get<std::int32_t>();
    const int cols = r.get<std::int32_t>();
    auto mask = r.get_array<std::uint8_t>();
    GridMap grid({ox, oy}, key.resolution, rows, cols, std::move(mask));

    const auto n_targets = r.get<std::uint64_t>();
    std::vector<Cell> cells;
    std::vector<std::vector<std::optional<StoredPath>>> paths;
    for (std::uint64_t t = 0; t < n_targets; ++t) {
      Cell c;
      c.row = r.get<std::int32_t>();
      c.col = r.get<std::int32_t>();
      cells.push_back(c);
      std::vector<std::optional<StoredPath>> per_cell(grid.size());
      for (auto& slot : per_cell) {
        if (r.get<std::uint8_t>() == 0) continue;
        StoredPath p;
        p.cost.straight = r.get<std::int64_t>();
        p.cost.diagonal = r.get<std::int64_t>();
        p.waypoints = r.get_array<Vec2>(1u << 20);
        slot = std::move(p);
      }
      paths.push_back(std::move(per_cell));
    }
    return PathTable(std::move(grid), std::move(cells), std::move(paths));
  } catch (const Error&) {
    return std::nullopt;
  }
}

PathTable load_or_build_paths(const Scene& scene, const RobotFootprint& footprint,
                              double resolution, const std::filesystem::path& cache_dir) {
  const PathCacheKey key{scene.geometry_hash(), resolution, footprint.radius};
  std::filesystem::path file;
  if (!cache_dir.empty()) {
    char name[64];
    std::snprintf(name, sizeof name, "paths-%016llx.bin",
                  static_cast<unsigned long long>(key.scene_hash));
    file = cache_dir / name;
    if (auto cached = load_path_cache(key, file)) return std::move(*cached);
  }
  const GridMap grid = build_grid(scene, footprint, resolution);
  std::vector<Vec2> targets;
  for (const auto& t : scene.targets()) targets.push_back(t.position.xy());
  PathTable table = dijkstra_all(grid, targets);
  if (!file.empty()) {
    std::filesystem::create_directories(cache_dir);
    save_path_cache(table, key, file);
  }
  return table;
}

}  // namespace sgnav
