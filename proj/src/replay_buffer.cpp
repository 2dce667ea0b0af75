#include "sgnav/replay_buffer.hpp"

#include <algorithm>

#include "sgnav/error.hpp"

namespace sgnav {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t action_dim)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      action_dim_(action_dim),
      obs_(capacity * obs_dim),
      next_obs_(capacity * obs_dim),
      action_(capacity * action_dim),
      reward_(capacity),
      done_(capacity) {
  if (capacity == 0 || obs_dim == 0 || action_dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "replay buffer dimensions must be > 0");
  }
}

void ReplayBuffer::push(const Transition& t) {
  if (t.observation.size() != obs_dim_ || t.next_observation.size() != obs_dim_ ||
      t.action.size() != action_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "transition does not match buffer dimensions");
  }
  std::lock_guard lock(mu_);
  const std::size_t s = head_;
  std::copy(t.observation.begin(), t.observation.end(), obs_.begin() + s * obs_dim_);
  std::copy(t.next_observation.begin(), t.next_observation.end(),
            next_obs_.begin() + s * obs_dim_);
  std::copy(t.action.begin(), t.action.end(), action_.begin() + s * action_dim_);
  reward_[s] = t.reward;
  done_[s] = t.done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mu_);
  return size_;
}

std::size_t ReplayBuffer::slot(std::size_t logical) const {
  // oldest element sits at head_ once the ring is full
  return size_ < capacity_ ? logical : (head_ + logical) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::draw(std::size_t n, std::mt19937_64& rng) const {
  if (size_ == 0) throw Error(ErrorCode::InvalidArgument, "cannot sample an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, std::mt19937_64& rng) const {
  std::lock_guard lock(mu_);
  return draw(n, rng);
}

Batch ReplayBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
  std::lock_guard lock(mu_);
  const auto idx = draw(n, rng);
  const auto od = static_cast<Eigen::Index>(obs_dim_);
  const auto ad = static_cast<Eigen::Index>(action_dim_);
  const auto bn = static_cast<Eigen::Index>(n);
  Batch b{Matrix(od, bn), Matrix(ad, bn), ColVector(bn), Matrix(od, bn), ColVector(bn)};
  for (Eigen::Index c = 0; c < bn; ++c) {
    const std::size_t s = slot(idx[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < od; ++r) {
      b.obs(r, c) = obs_[s * obs_dim_ + static_cast<std::size_t>(r)];
      b.next_obs(r, c) = next_obs_[s * obs_dim_ + static_cast<std::size_t>(r)];
    }
    for (Eigen::Index r = 0; r < ad; ++r) {
      b.action(r, c) = action_[s * action_dim_ + static_cast<std::size_t>(r)];
    }
    b.reward(c) = reward_[s];
    b.done(c) = done_[s];
  }
  return b;
}

Transition ReplayBuffer::at(std::size_t index) const {
  std::lock_guard lock(mu_);
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "replay index out of range");
  const std::size_t s = slot(index);
  Transition t;
  t.observation.assign(obs_.begin() + s * obs_dim_, obs_.begin() + (s + 1) * obs_dim_);
  t.next_observation.assign(next_obs_.begin() + s * obs_dim_,
                            next_obs_.begin() + (s + 1) * obs_dim_);
  t.action.assign(action_.begin() + s * action_dim_, action_.begin() + (s + 1) * action_dim_);
  t.reward = reward_[s];
  t.done = done_[s] != 0;
  return t;
}

}  // namespace sgnav
