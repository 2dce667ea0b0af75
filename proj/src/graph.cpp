#include "sgnav/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// (0, 1], never zero so the log below stays finite
double unit_open(std::uint64_t& state) {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Vector pseudo_embed(std::string_view text, std::size_t dim) {
  if (text.empty()) throw Error(ErrorCode::EmptyLabel, "cannot embed an empty label");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be > 0");
  std::uint64_t state = fnv1a64(text);
  Vector v(dim);
  for (std::size_t i = 0; i < dim; i += 2) {
    // Box-Muller; written out so embeddings are identical across standard
    // library implementations.
    const double r = std::sqrt(-2.0 * std::log(unit_open(state)));
    const double t = kTwoPi * unit_open(state);
    v[i] = r * std::cos(t);
    if (i + 1 < dim) v[i + 1] = r * std::sin(t);
  }
  const double n = norm(v);
  for (double& x : v) x /= n;
  return v;
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cosine_sim: vectors differ in length");
  }
  const double na = norm(a);
  const double nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::ZeroVector, "cosine_sim of a zero vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

Vector node_feature(const ObjectNode& node) {
  Vector f;
  f.reserve(node.embedding.size() + 6);
  f.insert(f.end(), {node.position.x, node.position.y, node.position.z, node.extent.x,
                     node.extent.y, node.extent.z});
  f.insert(f.end(), node.embedding.begin(), node.embedding.end());
  return f;
}

Vector similarity_weights(const SceneGraph& graph, std::span<const double> target,
                          double temperature) {
  if (graph.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "scene graph has no nodes");
  if (!(temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be > 0");
  Vector logits(graph.nodes.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits[i] = cosine_sim(graph.nodes[i].embedding, target) / temperature;
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - m);
    z += l;
  }
  for (double& l : logits) l /= z;
  return logits;
}

Vector encode_graph(const SceneGraph& graph, std::span<const double> target, double temperature) {
  const Vector w = similarity_weights(graph, target, temperature);
  Vector out(encoding_dim(target.size()), 0.0);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const Vector f = node_feature(graph.nodes[i]);
    if (f.size() != out.size()) {
      throw Error(ErrorCode::DimensionMismatch, "node embedding length differs from target");
    }
    for (std::size_t k = 0; k < f.size(); ++k) out[k] += w[i] * f[k];
  }
  return out;
}

std::size_t target_node(const SceneGraph& graph, std::span<const double> target) {
  if (graph.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "scene graph has no nodes");
  std::size_t best = 0;
  double best_sim = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const double s = cosine_sim(graph.nodes[i].embedding, target);
    if (s > best_sim) {
      best_sim = s;
      best = i;
    }
  }
  return best;
}

SceneGraph ground_truth_graph(const Scene& scene, std::size_t dim) {
  SceneGraph g;
  for (const auto& o : scene.obstacles()) {
    const std::string text = o.text();
    g.nodes.push_back({text, o.bbox_center(), o.bbox_extent(),
                       pseudo_embed(scene.canonical_text(text), dim)});
  }
  const auto& t = scene.active();
  g.nodes.push_back({t.label, t.position, t.extent, pseudo_embed(scene.canonical_text(t.label), dim)});
  return g;
}

Vector target_embedding(const Scene& scene, std::size_t dim) {
  return pseudo_embed(scene.canonical_text(scene.goal_text()), dim);
}

SceneGraph graph_noise(const SceneGraph& graph, std::size_t target_index, std::mt19937_64& rng,
                       double sigma, double p_drop) {
  if (!(p_drop >= 0.0 && p_drop < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p_drop must lie in [0, 1)");
  }
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  std::bernoulli_distribution drop(p_drop);
  std::normal_distribution<double> noise(0.0, 1.0);
  SceneGraph out;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const bool dropped = drop(rng);
    if (dropped && i != target_index) continue;
    ObjectNode n = graph.nodes[i];
    if (sigma > 0.0) {
      n.position.x += sigma * noise(rng);
      n.position.y += sigma * noise(rng);
      n.position.z += sigma * noise(rng);
    }
    out.nodes.push_back(std::move(n));
  }
  return out;
}

void validate_graph(const SceneGraph& graph, std::size_t dim) {
  for (const auto& n : graph.nodes) {
    if (n.label.empty()) throw Error(ErrorCode::EmptyLabel, "graph node with empty label");
    if (n.embedding.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "node '" + n.label + "' has wrong embedding length");
    }
    if (std::abs(norm(n.embedding) - 1.0) > 1e-6) {
      throw Error(ErrorCode::InvalidArgument, "node '" + n.label + "' embedding is not unit length");
    }
    if (!(n.extent.x > 0.0 && n.extent.y > 0.0 && n.extent.z > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "node '" + n.label + "' has non-positive extent");
    }
  }
}

}  // namespace sgnav
