#pragma once

#include <cstddef>
#include <mutex>
#include <random>
#include <vector>

#include "sgnav/graph.hpp"
#include "sgnav/mlp.hpp"

namespace sgnav {

/// One environment transition. `action` is the normalized command in [-1, 1].
/// `done` marks a terminal state, not a truncation.
struct Transition {
  Vector observation;
  Vector action;
  double reward = 0.0;
  Vector next_observation;
  bool done = false;
};

/// Column-major training batch (one sample per column).
struct Batch {
  Matrix obs;
  Matrix action;
  ColVector reward;
  Matrix next_obs;
  ColVector done;

  Eigen::Index size() const { return obs.cols(); }
};

/// Fixed-capacity FIFO ring of transitions with uniform sampling with
/// replacement. Observations are stored as float. push and sample are
/// mutually exclusive, so a reader never sees a half-written transition.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t action_dim);

  /// Throws DimensionMismatch.
  void push(const Transition& t);
  Batch sample(std::size_t n, std::mt19937_64& rng) const;

  /// Logical index 0 is the oldest stored transition.
  Transition at(std::size_t index) const;
  /// Indices drawn by sample(n, rng) for the same rng state.
  std::vector<std::size_t> sample_indices(std::size_t n, std::mt19937_64& rng) const;

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }

 private:
  std::vector<std::size_t> draw(std::size_t n, std::mt19937_64& rng) const;
  std::size_t slot(std::size_t logical) const;

  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t action_dim_;
  std::vector<float> obs_;
  std::vector<float> next_obs_;
  std::vector<float> action_;
  std::vector<double> reward_;
  std::vector<std::uint8_t> done_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
  mutable std::mutex mu_;
};

}  // namespace sgnav
