#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sgnav/error.hpp"
#include "sgnav/graph.hpp"
#include "sgnav/graph_io.hpp"
#include "sgnav/scene_gen.hpp"

using namespace sgnav;

namespace {

ObjectNode node(const std::string& label, Vec3 p, std::size_t dim) {
  return {label, p, {0.2, 0.3, 0.4}, pseudo_embed(label, dim)};
}

SceneGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SceneGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes.push_back(node("obj" + std::to_string(rng() % 1000), {u(rng), u(rng), u(rng)}, dim));
  }
  return g;
}

double l2(const Vector& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

TEST_CASE("pseudo embeddings are deterministic unit vectors") {
  const Vector a = pseudo_embed("bowl", 512);
  CHECK(a == pseudo_embed("bowl", 512));
  CHECK(a.size() == 512);
  CHECK(l2(a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2(pseudo_embed("x", 33)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pseudo_embed("", 8), Error);
}

TEST_CASE("pseudo embeddings are frozen") {
  // from an independent reimplementation of the hash and Box-Muller stream;
  // change only with a format bump
  const Vector a = pseudo_embed("bowl", 5);
  const Vector want_a{-0.04745461692718704, 0.5161013359601769, -0.6098037787313709,
                      0.012829901497534386, 0.5994682772465274};
  const Vector b = pseudo_embed("red wall", 5);
  const Vector want_b{0.3518001917560002, 0.6516592818792556, 0.19080724418604758,
                      0.4380757702672585, -0.472502931728395};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a[i] == doctest::Approx(want_a[i]).epsilon(1e-13));
    CHECK(b[i] == doctest::Approx(want_b[i]).epsilon(1e-13));
  }
  CHECK(pseudo_embed("bowl", 5) == a);
}

TEST_CASE("unrelated labels are nearly orthogonal at D = 512") {
  int over = 0;
  for (int i = 0; i < 100; ++i) {
    const double c = cosine_sim(pseudo_embed("label-a-" + std::to_string(i), 512),
                                pseudo_embed("label-b-" + std::to_string(i), 512));
    if (std::abs(c) >= 0.2) ++over;
  }
  // |cos| of random unit vectors has std 1/sqrt(512) ~ 0.044; 0.2 is ~4.5 sigma
  CHECK(over == 0);
}

TEST_CASE("cosine similarity basics") {
  const Vector v{1.0, 2.0, -3.0};
  const Vector neg{-1.0, -2.0, 3.0};
  CHECK(cosine_sim(v, v) == doctest::Approx(1.0));
  CHECK(cosine_sim(v, neg) == doctest::Approx(-1.0));
  CHECK(cosine_sim(Vector{1, 0, 0}, Vector{0, 1, 0}) == 0.0);
  CHECK_THROWS_AS(cosine_sim(Vector{0, 0}, Vector{1, 0}), Error);
  CHECK_THROWS_AS(cosine_sim(Vector{1, 0}, Vector{1, 0, 0}), Error);
}

TEST_CASE("similarity weights form a distribution") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const SceneGraph g = random_graph(rng, 1 + rng() % 8, 32);
    const Vector q = pseudo_embed("query" + std::to_string(k), 32);
    const Vector w = similarity_weights(g, q, 0.1);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : w) CHECK(x >= 0.0);
  }
  CHECK_THROWS_AS(similarity_weights(SceneGraph{}, pseudo_embed("q", 8), 0.1), Error);
}

TEST_CASE("single node encodes to its own feature") {
  SceneGraph g{{node("table", {1.0, 2.0, 0.35}, 16)}};
  const Vector q = pseudo_embed("bowl", 16);
  CHECK(encode_graph(g, q, 0.1) == node_feature(g.nodes[0]));
}

TEST_CASE("identical embeddings average their features") {
  SceneGraph g{{node("chair", {1.0, 2.0, 0.5}, 16), node("chair", {3.0, -2.0, 0.5}, 16)}};
  const Vector enc = encode_graph(g, pseudo_embed("bowl", 16), 0.1);
  const Vector a = node_feature(g.nodes[0]);
  const Vector b = node_feature(g.nodes[1]);
  for (std::size_t i = 0; i < enc.size(); ++i) CHECK(enc[i] == doctest::Approx(0.5 * (a[i] + b[i])));
}

TEST_CASE("encoding is permutation invariant") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    SceneGraph g = random_graph(rng, 6, 32);
    const Vector q = pseudo_embed("q", 32);
    const Vector a = encode_graph(g, q, 0.1);
    std::shuffle(g.nodes.begin(), g.nodes.end(), rng);
    const Vector b = encode_graph(g, q, 0.1);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }
}

TEST_CASE("low temperature selects the matching node") {
  SceneGraph g{{node("table", {1, 1, 0.3}, 32), node("bowl", {2, 3, 0.7}, 32),
                node("chair", {-1, 4, 0.4}, 32)}};
  const Vector enc = encode_graph(g, pseudo_embed("bowl", 32), 1e-3);
  const Vector f = node_feature(g.nodes[1]);
  for (std::size_t i = 0; i < enc.size(); ++i) CHECK(std::abs(enc[i] - f[i]) <= 1e-3);
  CHECK(target_node(g, pseudo_embed("bowl", 32)) == 1);
}

TEST_CASE("target_node breaks ties toward the lowest index") {
  SceneGraph g{{node("a", {0, 0, 0}, 8), node("b", {1, 0, 0}, 8), node("b", {2, 0, 0}, 8)}};
  CHECK(target_node(g, pseudo_embed("b", 8)) == 1);
}

TEST_CASE("ground truth graph cardinality and contents") {
  const Scene simple = gen_scene(SceneFamily::Simple, 3);
  const SceneGraph g = ground_truth_graph(simple, 32);
  CHECK(g.nodes.size() == 3);  // table, pole, bowl
  CHECK(g.nodes.back().position.x == simple.active().position.x);
  validate_graph(g, 32);

  // three chairs, two tables, one bowl
  const Scene chairs = gen_scene(SceneFamily::RandomChairs, 6);
  const SceneGraph c = ground_truth_graph(chairs, 32);
  CHECK(c.nodes.size() == 6);
  for (std::size_t i = 0; i < chairs.obstacles().size(); ++i) {
    CHECK(c.nodes[i].extent.x == chairs.obstacles()[i].bbox_extent().x);
    CHECK(c.nodes[i].extent.z == chairs.obstacles()[i].bbox_extent().z);
  }

  std::vector<TargetCandidate> t{{"bowl", {1.0, 1.0, 0.5}, {0.15, 0.15, 0.08}, ""}};
  const Scene empty({0, 0, 4, 4}, {}, t, 0);
  CHECK(ground_truth_graph(empty, 8).nodes.size() == 1);
}

TEST_CASE("goal query matches the target node through synonyms") {
  const Scene s = gen_scene(SceneFamily::TwoWall, 1);
  const SceneGraph g = ground_truth_graph(s, 32);
  CHECK(target_node(g, target_embedding(s, 32)) == g.nodes.size() - 1);
}

TEST_CASE("graph noise") {
  std::mt19937_64 rng(6);
  SceneGraph g = random_graph(rng, 5, 16);
  SceneGraph same = graph_noise(g, 4, rng, 0.0, 0.0);
  REQUIRE(same.nodes.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(same.nodes[i].position.x == g.nodes[i].position.x);
    CHECK(same.nodes[i].embedding == g.nodes[i].embedding);
  }
  long survivors = 0;
  for (int k = 0; k < 1000; ++k) {
    const SceneGraph d = graph_noise(g, 2, rng, 0.0, 0.999);
    bool has_target = false;
    for (const auto& n : d.nodes) has_target |= n.position.x == g.nodes[2].position.x;
    CHECK(has_target);
    survivors += static_cast<long>(d.nodes.size()) - 1;
  }
  CHECK(survivors < 20);  // expected 4 nodes * 1000 * 0.001 = 4

  double sq = 0.0;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    const SceneGraph d = graph_noise(g, 0, rng, 0.1, 0.0);
    const double dx = d.nodes[0].position.x - g.nodes[0].position.x;
    const double dy = d.nodes[0].position.y - g.nodes[0].position.y;
    const double dz = d.nodes[0].position.z - g.nodes[0].position.z;
    sq += dx * dx + dy * dy + dz * dz;
  }
  // E|d|^2 = 3 sigma^2; the sample mean of 1000 has relative std sqrt(2/3000)
  CHECK(std::sqrt(sq / n) == doctest::Approx(0.1 * std::sqrt(3.0)).epsilon(0.05));
  CHECK_THROWS_AS(graph_noise(g, 0, rng, 0.1, 1.0), Error);
}

TEST_CASE("graph file round trip is bit exact") {
  std::mt19937_64 rng(8);
  SceneGraph g = random_graph(rng, 4, 12);
  g.nodes[1].label = "red \"quoted\" chair";
  std::stringstream ss;
  write_graph(ss, g);
  const SceneGraph r = read_graph(ss, 12);
  REQUIRE(r.nodes.size() == g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(r.nodes[i].label == g.nodes[i].label);
    CHECK(r.nodes[i].position.x == g.nodes[i].position.x);
    CHECK(r.nodes[i].position.z == g.nodes[i].position.z);
    CHECK(r.nodes[i].extent.y == g.nodes[i].extent.y);
    CHECK(r.nodes[i].embedding == g.nodes[i].embedding);
  }
}

TEST_CASE("graph file without embeddings and malformed input") {
  std::stringstream ok("sgnav-graph 1\nnode \"bowl\" 0x1p+0 0x0p+0 0x0p+0 0x1p-3 0x1p-3 0x1p-4\n");
  const SceneGraph g = read_graph(ok, 16);
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0].embedding == pseudo_embed("bowl", 16));
  CHECK(g.nodes[0].position.x == 1.0);
  std::stringstream bad_header("graph 2\n");
  CHECK_THROWS_AS(read_graph(bad_header, 16), Error);
  std::stringstream bad_number("sgnav-graph 1\nnode \"bowl\" zz 0 0 1 1 1\n");
  CHECK_THROWS_AS(read_graph(bad_number, 16), Error);
}
