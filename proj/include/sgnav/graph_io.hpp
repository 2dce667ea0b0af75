#pragma once

#include <filesystem>
#include <iosfwd>

#include "sgnav/graph.hpp"

namespace sgnav {

// Text format, one record per line:
//
//   sgnav-graph 1
//   node "<label>" px py pz ex ey ez [emb e0 e1 ...]
//
// Numbers are C99 hexadecimal floats so a write/read cycle is bit-exact.
// Nodes without `emb` get pseudo_embed(label, dim).

void write_graph(std::ostream& out, const SceneGraph& graph);
SceneGraph read_graph(std::istream& in, std::size_t dim);

void save_graph(const SceneGraph& graph, const std::filesystem::path& path);
SceneGraph load_graph(const std::filesystem::path& path, std::size_t dim);

}  // namespace sgnav
