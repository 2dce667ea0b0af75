#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <vector>

namespace sgnav {

using Matrix = Eigen::MatrixXd;
using ColVector = Eigen::VectorXd;

/// Fully connected network with tanh hidden units and a linear output.
/// Batches are column-major: one sample per column.
class Mlp {
 public:
  struct Layer {
    Matrix weight;  // out x in
    ColVector bias;
  };

  /// Per-layer activations from a forward pass; acts[0] is the input.
  struct Cache {
    std::vector<Matrix> acts;
  };

  Mlp() = default;
  explicit Mlp(const std::vector<int>& sizes);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.
  void init_uniform(std::mt19937_64& rng);
  void set_zero();

  Matrix forward(const Matrix& x, Cache* cache = nullptr) const;

  /// Backpropagates dL/d(output). Accumulates parameter gradients into
  /// `grads` when non-null and returns dL/d(input).
  Matrix backward(const Cache& cache, const Matrix& d_out, Mlp* grads) const;

  int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  std::size_t num_params() const;
  /// Flat view over all weights then biases, layer by layer.
  double& param(std::size_t flat);
  double param(std::size_t flat) const;

  Mlp zeros_like() const;
  /// this <- keep * this + (1 - keep) * source
  void blend(const Mlp& source, double keep);
  bool finite() const;

 private:
  std::vector<Layer> layers_;
};

/// Adam over the parameters of one Mlp.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& shape, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(Mlp& params, const Mlp& grads);

  Mlp& first_moment() { return m_; }
  Mlp& second_moment() { return v_; }
  long& steps() { return t_; }
  const Mlp& first_moment() const { return m_; }
  const Mlp& second_moment() const { return v_; }
  long steps() const { return t_; }
  double lr() const { return lr_; }

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  Mlp m_;
  Mlp v_;
  long t_ = 0;
};

/// Adam for a single scalar parameter.
struct ScalarAdam {
  double lr = 3e-4;
  double m = 0.0;
  double v = 0.0;
  long t = 0;

  void step(double& param, double grad);
};

}  // namespace sgnav
