#include "sgnav/graph_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

void put_hex(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " %a", v);
  out << buf;
}

double parse_hex(std::istream& in, int line) {
  std::string tok;
  if (!(in >> tok)) {
    throw Error(ErrorCode::Config, "graph line " + std::to_string(line) + ": missing number");
  }
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) {
    throw Error(ErrorCode::Config,
                "graph line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

void write_graph(std::ostream& out, const SceneGraph& graph) {
  out << "sgnav-graph 1\n";
  for (const auto& n : graph.nodes) {
    out << "node " << std::quoted(n.label);
    for (double v : {n.position.x, n.position.y, n.position.z, n.extent.x, n.extent.y, n.extent.z}) {
      put_hex(out, v);
    }
    out << " emb";
    for (double v : n.embedding) put_hex(out, v);
    out << '\n';
  }
}

SceneGraph read_graph(std::istream& in, std::size_t dim) {
  std::string line;
  int lineno = 0;
  bool header = false;
  SceneGraph g;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (!header) {
      int version = 0;
      if (kind != "sgnav-graph" || !(ls >> version) || version != 1) {
        throw Error(ErrorCode::Config, "graph file: missing 'sgnav-graph 1' header");
      }
      header = true;
      continue;
    }
    if (kind != "node") {
      throw Error(ErrorCode::Config, "graph line " + std::to_string(lineno) + ": unknown record");
    }
    ObjectNode n;
    ls >> std::quoted(n.label);
    if (n.label.empty()) throw Error(ErrorCode::EmptyLabel, "graph node with empty label");
    n.position = {parse_hex(ls, lineno), parse_hex(ls, lineno), parse_hex(ls, lineno)};
    n.extent = {parse_hex(ls, lineno), parse_hex(ls, lineno), parse_hex(ls, lineno)};
    std::string tag;
    if (ls >> tag) {
      if (tag != "emb") {
        throw Error(ErrorCode::Config, "graph line " + std::to_string(lineno) + ": expected 'emb'");
      }
      for (std::size_t k = 0; k < dim; ++k) n.embedding.push_back(parse_hex(ls, lineno));
      std::string extra;
      if (ls >> extra) {
        throw Error(ErrorCode::DimensionMismatch,
                    "graph line " + std::to_string(lineno) + ": embedding longer than " +
                        std::to_string(dim));
      }
    } else {
      n.embedding = pseudo_embed(n.label, dim);
    }
    g.nodes.push_back(std::move(n));
  }
  if (!header) throw Error(ErrorCode::Config, "graph file is empty");
  return g;
}

void save_graph(const SceneGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write graph file " + path.string());
  write_graph(out, graph);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

SceneGraph load_graph(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open graph file " + path.string());
  return read_graph(in, dim);
}

}  // namespace sgnav
