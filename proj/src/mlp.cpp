#include "sgnav/mlp.hpp"

#include <cmath>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

// tanh through the vectorized exp; absolute error stays at the 1e-16 level.
void tanh_inplace(Matrix& z) {
  z = (1.0 - 2.0 / ((2.0 * z.array()).exp() + 1.0)).matrix();
}

}  // namespace

Mlp::Mlp(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw Error(ErrorCode::InvalidArgument, "mlp needs at least two sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (sizes[i] <= 0 || sizes[i + 1] <= 0) {
      throw Error(ErrorCode::InvalidArgument, "mlp layer sizes must be positive");
    }
    layers_.push_back({Matrix::Zero(sizes[i + 1], sizes[i]), ColVector::Zero(sizes[i + 1])});
  }
}

void Mlp::init_uniform(std::mt19937_64& rng) {
  for (auto& l : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.weight.cols()));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index j = 0; j < l.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < l.weight.rows(); ++i) l.weight(i, j) = u(rng);
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = u(rng);
  }
}

void Mlp::set_zero() {
  for (auto& l : layers_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

Matrix Mlp::forward(const Matrix& x, Cache* cache) const {
  if (x.rows() != input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "mlp input has " + std::to_string(x.rows()) +
                                                  " rows, expected " +
                                                  std::to_string(input_dim()));
  }
  if (cache) {
    cache->acts.resize(layers_.size() + 1);
    cache->acts[0] = x;
  }
  Matrix a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) tanh_inplace(z);
    if (cache) cache->acts[l + 1] = z;
    a = std::move(z);
  }
  return a;
}

Matrix Mlp::backward(const Cache& cache, const Matrix& d_out, Mlp* grads) const {
  Matrix delta = d_out;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    if (l + 1 < layers_.size()) {
      delta.array() *= 1.0 - cache.acts[l + 1].array().square();
    }
    if (grads) {
      grads->layers_[l].weight.noalias() += delta * cache.acts[l].transpose();
      grads->layers_[l].bias.noalias() += delta.rowwise().sum();
    }
    delta = layers_[l].weight.transpose() * delta;
  }
  return delta;
}

std::size_t Mlp::num_params() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

double& Mlp::param(std::size_t flat) {
  for (auto& l : layers_) {
    const auto nw = static_cast<std::size_t>(l.weight.size());
    if (flat < nw) return l.weight.data()[flat];
    flat -= nw;
    const auto nb = static_cast<std::size_t>(l.bias.size());
    if (flat < nb) return l.bias.data()[flat];
    flat -= nb;
  }
  throw Error(ErrorCode::InvalidArgument, "mlp parameter index out of range");
}

double Mlp::param(std::size_t flat) const { return const_cast<Mlp*>(this)->param(flat); }

Mlp Mlp::zeros_like() const {
  Mlp z = *this;
  z.set_zero();
  return z;
}

void Mlp::blend(const Mlp& source, double keep) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].weight = keep * layers_[l].weight + (1.0 - keep) * source.layers_[l].weight;
    layers_[l].bias = keep * layers_[l].bias + (1.0 - keep) * source.layers_[l].bias;
  }
}

bool Mlp::finite() const {
  for (const auto& l : layers_) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

Adam::Adam(const Mlp& shape, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(shape.zeros_like()),
      v_(shape.zeros_like()) {}

void Adam::step(Mlp& params, const Mlp& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  for (std::size_t l = 0; l < params.layers().size(); ++l) {
    auto& pl = params.layers()[l];
    const auto& gl = grads.layers()[l];
    update(pl.weight, gl.weight, m_.layers()[l].weight, v_.layers()[l].weight);
    update(pl.bias, gl.bias, m_.layers()[l].bias, v_.layers()[l].bias);
  }
}

void ScalarAdam::step(double& param, double grad) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++t;
  m = b1 * m + (1.0 - b1) * grad;
  v = b2 * v + (1.0 - b2) * grad * grad;
  const double mh = m / (1.0 - std::pow(b1, static_cast<double>(t)));
  const double vh = v / (1.0 - std::pow(b2, static_cast<double>(t)));
  param -= lr * mh / (std::sqrt(vh) + eps);
}

}  // namespace sgnav
