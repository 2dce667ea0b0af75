#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgnav/geometry.hpp"
#include "sgnav/scene.hpp"

namespace sgnav {

using Vector = std::vector<double>;

/// One scene-graph object: 3D bounding box plus a unit text embedding.
struct ObjectNode {
  std::string label;
  Vec3 position;
  Vec3 extent;
  Vector embedding;
};

struct SceneGraph {
  std::vector<ObjectNode> nodes;
};

struct EncoderConfig {
  std::size_t embedding_dim = 512;
  double temperature = 0.1;
};

/// Pooled encoding length: position (3) + extent (3) + embedding.
inline constexpr std::size_t encoding_dim(std::size_t embedding_dim) { return embedding_dim + 6; }

/// Deterministic stand-in for a CLIP text encoder: hash the bytes, draw a
/// Gaussian vector from a splitmix64 stream, L2-normalize. Unrelated labels
/// come out nearly orthogonal. Throws EmptyLabel.
Vector pseudo_embed(std::string_view text, std::size_t dim);

/// Throws ZeroVector or DimensionMismatch.
double cosine_sim(std::span<const double> a, std::span<const double> b);

/// concat(position, extent, embedding)
Vector node_feature(const ObjectNode& node);

/// softmax_i(cos(e_i, target) / temperature)
Vector similarity_weights(const SceneGraph& graph, std::span<const double> target,
                          double temperature);

/// Target-conditioned pooling: sum_i w_i * node_feature_i with the weights
/// above. Throws EmptyGraph / DimensionMismatch.
Vector encode_graph(const SceneGraph& graph, std::span<const double> target, double temperature);

/// Index of the node most similar to `target` (lowest index on ties).
std::size_t target_node(const SceneGraph& graph, std::span<const double> target);

/// One node per obstacle followed by the active target object. Embeddings are
/// pseudo_embed of the synonym-mapped "<color> <label>" text.
SceneGraph ground_truth_graph(const Scene& scene, std::size_t dim);

/// Encoder query for the scene's goal command (synonym-mapped).
Vector target_embedding(const Scene& scene, std::size_t dim);

/// Drops each non-target node with probability p_drop and adds N(0, sigma^2)
/// to every position coordinate. The target node is always kept.
SceneGraph graph_noise(const SceneGraph& graph, std::size_t target_index, std::mt19937_64& rng,
                       double sigma, double p_drop);

/// Checks the node invariants: unit embeddings of `dim`, positive extents.
void validate_graph(const SceneGraph& graph, std::size_t dim);

}  // namespace sgnav
