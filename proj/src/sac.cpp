#include "sgnav/sac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kLog2 = 0.69314718055994530942;
constexpr double kGradFloor = 1e-6;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  }
  return m;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NaNDetected, std::string("non-finite ") + what + " during SAC update");
  }
}

}  // namespace

void SacConfig::validate() const {
  if (obs_dim <= 0 || action_dim <= 0 || hidden <= 0) {
    throw Error(ErrorCode::Config, "SAC dimensions must be positive");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::Config, "gamma must lie in [0, 1]");
  if (!(polyak >= 0.0 && polyak <= 1.0)) throw Error(ErrorCode::Config, "polyak must lie in [0, 1]");
  if (batch_size <= 0) throw Error(ErrorCode::Config, "batch_size must be > 0");
  if (!(init_alpha > 0.0)) throw Error(ErrorCode::Config, "init_alpha must be > 0");
  if (!(log_std_max > log_std_min)) throw Error(ErrorCode::Config, "log_std bounds inverted");
}

namespace sac {

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix m(top.rows() + bottom.rows(), top.cols());
  m.topRows(top.rows()) = top;
  m.bottomRows(bottom.rows()) = bottom;
  return m;
}

PolicySample sample_policy(const Mlp& actor, const Matrix& obs, const Matrix& eps,
                           const SacConfig& config, Mlp::Cache* cache) {
  const Eigen::Index a = config.action_dim;
  const Matrix out = actor.forward(obs, cache);
  PolicySample s;
  s.mean = out.topRows(a);
  s.raw_log_std = out.bottomRows(a);
  const double span = config.log_std_max - config.log_std_min;
  s.log_std = (config.log_std_min + 0.5 * span * (s.raw_log_std.array().tanh() + 1.0)).matrix();
  s.eps = eps;
  s.pre_tanh = s.mean + (s.log_std.array().exp() * eps.array()).matrix();
  s.action = s.pre_tanh.array().tanh().matrix();
  s.log_prob.resize(obs.cols());
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    double lp = 0.0;
    for (Eigen::Index i = 0; i < a; ++i) {
      const double u = s.pre_tanh(i, j);
      // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u))
      lp += -0.5 * eps(i, j) * eps(i, j) - s.log_std(i, j) - kHalfLog2Pi -
            2.0 * (kLog2 - u - softplus(-2.0 * u));
    }
    s.log_prob(j) = lp;
  }
  return s;
}

ColVector td_target(const SacParams& p, const SacConfig& config, const Batch& batch,
                    const Matrix& next_eps) {
  const PolicySample next = sample_policy(p.actor, batch.next_obs, next_eps, config, nullptr);
  const Matrix in = stack(batch.next_obs, next.action);
  const Matrix t1 = p.q1_target.forward(in);
  const Matrix t2 = p.q2_target.forward(in);
  const double alpha = std::exp(p.log_alpha);
  ColVector y(batch.size());
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    const double soft_v = std::min(t1(0, j), t2(0, j)) - alpha * next.log_prob(j);
    y(j) = batch.reward(j) + config.gamma * (1.0 - batch.done(j)) * soft_v;
  }
  return y;
}

double critic_loss(const Mlp& q, const Batch& batch, const ColVector& target, Mlp* grad,
                   double* mean_q) {
  Mlp::Cache cache;
  const Matrix qv = q.forward(stack(batch.obs, batch.action), grad ? &cache : nullptr);
  const double n = static_cast<double>(batch.size());
  const Eigen::RowVectorXd err = qv.row(0) - target.transpose();
  if (mean_q) *mean_q = qv.row(0).mean();
  if (grad) q.backward(cache, err / n, grad);
  return 0.5 * err.squaredNorm() / n;
}

double actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2, double alpha,
                  const SacConfig& config, const Matrix& obs, const Matrix& eps, Mlp* grad,
                  Eigen::RowVectorXd* log_prob) {
  Mlp::Cache actor_cache;
  const PolicySample s = sample_policy(actor, obs, eps, config, grad ? &actor_cache : nullptr);
  if (log_prob) *log_prob = s.log_prob;
  const Matrix in = stack(obs, s.action);
  Mlp::Cache c1, c2;
  const Matrix v1 = q1.forward(in, grad ? &c1 : nullptr);
  const Matrix v2 = q2.forward(in, grad ? &c2 : nullptr);
  const Eigen::Index b = obs.cols();
  const double n = static_cast<double>(b);

  Eigen::RowVectorXd pick1(b), pick2(b);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < b; ++j) {
    const bool first = v1(0, j) <= v2(0, j);
    pick1(j) = first ? 1.0 : 0.0;
    pick2(j) = first ? 0.0 : 1.0;
    loss += alpha * s.log_prob(j) - (first ? v1(0, j) : v2(0, j));
  }
  loss /= n;
  if (!grad) return loss;

  const Eigen::Index a = config.action_dim;
  const Matrix dq = q1.backward(c1, pick1, nullptr).bottomRows(a) +
                    q2.backward(c2, pick2, nullptr).bottomRows(a);
  const Eigen::ArrayXXd t = s.action.array();
  const Eigen::ArrayXXd sigma = s.log_std.array().exp();
  // dL/du = (alpha * 2 tanh(u) - dQ/da * (1 - a^2)) / n
  const Eigen::ArrayXXd d_u = (alpha * 2.0 * t - dq.array() * (1.0 - t.square())) / n;
  const Eigen::ArrayXXd d_ls = -alpha / n + d_u * sigma * s.eps.array();
  const double span = config.log_std_max - config.log_std_min;
  const Eigen::ArrayXXd d_raw = d_ls * 0.5 * span * (1.0 - s.raw_log_std.array().tanh().square());
  Matrix d_out(2 * a, b);
  d_out.topRows(a) = d_u.matrix();
  d_out.bottomRows(a) = d_raw.matrix();
  actor.backward(actor_cache, d_out, grad);
  return loss;
}

Batch random_batch(int obs_dim, int action_dim, Eigen::Index n, std::mt19937_64& rng) {
  static constexpr double kRewards[] = {-5.0, -0.2, -0.1, 2.0};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> r(0, 3);
  std::bernoulli_distribution terminal(0.1);
  Batch b;
  b.obs = gaussian(obs_dim, n, rng);
  b.next_obs = gaussian(obs_dim, n, rng);
  b.action.resize(action_dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < action_dim; ++i) b.action(i, j) = u(rng);
  }
  b.reward.resize(n);
  b.done.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    b.reward(j) = kRewards[r(rng)];
    b.done(j) = terminal(rng) ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace sac

SacAgent::SacAgent(SacConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
  config_.validate();
  const int in_q = config_.obs_dim + config_.action_dim;
  const int h = config_.hidden;
  params_.actor = Mlp({config_.obs_dim, h, h, 2 * config_.action_dim});
  params_.q1 = Mlp({in_q, h, h, 1});
  params_.q2 = Mlp({in_q, h, h, 1});
  // separate streams so the twin critics start from different weights
  std::mt19937_64 actor_rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
  std::mt19937_64 q1_rng(seed * 0x9e3779b97f4a7c15ull + 1);
  std::mt19937_64 q2_rng(seed * 0x9e3779b97f4a7c15ull + 2);
  params_.actor.init_uniform(actor_rng);
  params_.q1.init_uniform(q1_rng);
  params_.q2.init_uniform(q2_rng);
  params_.q1_target = params_.q1;
  params_.q2_target = params_.q2;
  params_.log_alpha = std::log(config_.init_alpha);
  params_.actor_opt = Adam(params_.actor, config_.actor_lr);
  params_.q1_opt = Adam(params_.q1, config_.critic_lr);
  params_.q2_opt = Adam(params_.q2, config_.critic_lr);
  params_.alpha_opt = ScalarAdam{config_.alpha_lr};
}

double SacAgent::alpha() const { return std::exp(params_.log_alpha); }

Vector SacAgent::act(std::span<const double> observation, bool deterministic,
                     std::mt19937_64& rng) const {
  if (observation.size() != static_cast<std::size_t>(config_.obs_dim)) {
    throw Error(ErrorCode::DimensionMismatch, "observation length " +
                                                  std::to_string(observation.size()) +
                                                  " != " + std::to_string(config_.obs_dim));
  }
  const Eigen::Map<const ColVector> obs(observation.data(),
                                        static_cast<Eigen::Index>(observation.size()));
  Matrix eps = Matrix::Zero(config_.action_dim, 1);
  if (!deterministic) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (Eigen::Index i = 0; i < eps.rows(); ++i) eps(i, 0) = n(rng);
  }
  const PolicySample s = sac::sample_policy(params_.actor, obs, eps, config_, nullptr);
  return Vector(s.action.data(), s.action.data() + s.action.size());
}

SacLosses SacAgent::update(const Batch& batch) {
  if (batch.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty SAC batch");
  const Eigen::Index b = batch.size();
  const Matrix next_eps = gaussian(config_.action_dim, b, rng_);
  const Matrix eps = gaussian(config_.action_dim, b, rng_);
  const double alpha = this->alpha();
  SacLosses out;
  out.alpha = alpha;

  // temperature, using log-probabilities of fresh policy samples
  const PolicySample pi = sac::sample_policy(params_.actor, batch.obs, eps, config_, nullptr);
  const double mean_term = (pi.log_prob.array() + config_.target_entropy()).mean();
  out.alpha_loss = -params_.log_alpha * mean_term;
  params_.alpha_opt.step(params_.log_alpha, -mean_term);

  // critics
  const ColVector y = sac::td_target(params_, config_, batch, next_eps);
  Mlp g1 = params_.q1.zeros_like();
  Mlp g2 = params_.q2.zeros_like();
  double mq1 = 0.0, mq2 = 0.0;
  out.critic = sac::critic_loss(params_.q1, batch, y, &g1, &mq1) +
               sac::critic_loss(params_.q2, batch, y, &g2, &mq2);
  out.mean_q = 0.5 * (mq1 + mq2);
  params_.q1_opt.step(params_.q1, g1);
  params_.q2_opt.step(params_.q2, g2);

  // actor against the updated critics
  Mlp ga = params_.actor.zeros_like();
  out.actor = sac::actor_loss(params_.actor, params_.q1, params_.q2, alpha, config_, batch.obs,
                              eps, &ga);
  params_.actor_opt.step(params_.actor, ga);

  params_.q1_target.blend(params_.q1, config_.polyak);
  params_.q2_target.blend(params_.q2, config_.polyak);

  check_finite(out.critic, "critic loss");
  check_finite(out.actor, "actor loss");
  check_finite(params_.log_alpha, "log temperature");
  if (!params_.actor.finite() || !params_.q1.finite() || !params_.q2.finite()) {
    throw Error(ErrorCode::NaNDetected, "non-finite network weights after SAC update");
  }
  return out;
}

namespace {

double rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), kGradFloor});
}

}  // namespace

GradCheckResult gradient_check(const SacAgent& agent, const Batch& batch, std::mt19937_64& rng,
                               std::size_t num_weights, double h, const GradientTamper& tamper) {
  if (batch.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty batch for gradient check");
  const SacConfig& cfg = agent.config();
  SacParams p = agent.params();
  const Matrix next_eps = gaussian(cfg.action_dim, batch.size(), rng);
  const Matrix eps = gaussian(cfg.action_dim, batch.size(), rng);
  const ColVector y = sac::td_target(p, cfg, batch, next_eps);
  const double alpha = std::exp(p.log_alpha);

  Mlp g1 = p.q1.zeros_like();
  Mlp g2 = p.q2.zeros_like();
  Mlp ga = p.actor.zeros_like();
  sac::critic_loss(p.q1, batch, y, &g1);
  sac::critic_loss(p.q2, batch, y, &g2);
  sac::actor_loss(p.actor, p.q1, p.q2, alpha, cfg, batch.obs, eps, &ga);
  if (tamper) tamper(ga, g1, g2);

  GradCheckResult res;
  const std::size_t n_actor = num_weights / 2;
  const std::size_t n_critic = num_weights - n_actor;

  auto probe = [&](Mlp& net, const Mlp& grad, std::size_t count, auto&& loss) {
    std::uniform_int_distribution<std::size_t> pick(0, net.num_params() - 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t i = pick(rng);
      const double saved = net.param(i);
      net.param(i) = saved + h;
      const double lp = loss();
      net.param(i) = saved - h;
      const double lm = loss();
      net.param(i) = saved;
      worst = std::max(worst, rel_error(grad.param(i), (lp - lm) / (2.0 * h)));
      ++res.checked;
    }
    return worst;
  };

  const double c1 = probe(p.q1, g1, n_critic / 2,
                          [&] { return sac::critic_loss(p.q1, batch, y, nullptr); });
  const double c2 = probe(p.q2, g2, n_critic - n_critic / 2,
                          [&] { return sac::critic_loss(p.q2, batch, y, nullptr); });
  res.critic_max = std::max(c1, c2);
  res.actor_max = probe(p.actor, ga, n_actor, [&] {
    return sac::actor_loss(p.actor, p.q1, p.q2, alpha, cfg, batch.obs, eps, nullptr);
  });
  res.max_rel_error = std::max(res.critic_max, res.actor_max);
  return res;
}

}  // namespace sgnav
