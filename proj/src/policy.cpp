#include "randpol/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace randpol {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)
}

GaussianPolicy::GaussianPolicy(Approximator mean_fn, double log_std_init)
    : mean_fn_(std::move(mean_fn)),
      log_std_(Eigen::VectorXd::Constant(mean_fn_.output_dim(), log_std_init)) {}

std::pair<Eigen::VectorXd, double> GaussianPolicy::sample(const Eigen::VectorXd& x,
                                                          Rng& rng) const {
  Eigen::VectorXd mu = mean_fn_.forward(x);
  Eigen::VectorXd u(mu.size());
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double sigma = std::exp(log_std_(i));
    double z = rng.normal();
    u(i) = mu(i) + sigma * z;
    lp += -0.5 * z * z - log_std_(i) - 0.5 * kLog2Pi;
  }
  return {u, lp};
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  if (u.size() != action_dim()) {
    throw std::invalid_argument("GaussianPolicy::log_prob: action dimension mismatch");
  }
  Eigen::VectorXd mu = mean_fn_.forward(x);
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double z = (u(i) - mu(i)) / std::exp(log_std_(i));
    lp += -0.5 * z * z - log_std_(i) - 0.5 * kLog2Pi;
  }
  return lp;
}

Eigen::VectorXd GaussianPolicy::log_prob_from_mean(const Eigen::MatrixXd& mu,
                                                   const Eigen::MatrixXd& u) const {
  if (mu.rows() != u.rows() || mu.cols() != u.cols() || mu.cols() != action_dim()) {
    throw std::invalid_argument("GaussianPolicy::log_prob_from_mean: shape mismatch");
  }
  const Eigen::ArrayXd inv_sigma = (-log_std_.array()).exp();
  Eigen::ArrayXXd z = (u - mu).array().rowwise() * inv_sigma.transpose();
  Eigen::VectorXd lp =
      (-0.5 * z.square()).rowwise().sum().matrix() +
      Eigen::VectorXd::Constant(mu.rows(), -log_std_.sum() - 0.5 * kLog2Pi * action_dim());
  return lp;
}

double GaussianPolicy::entropy() const {
  // 0.5*log(2*pi*e) per dimension plus the log stds
  return 0.5 * (kLog2Pi + 1.0) * action_dim() + log_std_.sum();
}

Eigen::VectorXd GaussianPolicy::grad_log_prob(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& u) const {
  Approximator::Ctx ctx;
  Eigen::MatrixXd mu = mean_fn_.forward_batch(x.transpose(), &ctx);
  Eigen::ArrayXd sigma = log_std_.array().exp();
  Eigen::ArrayXd diff = (u - mu.row(0).transpose()).array();
  // d logp / d mu_i = (u_i - mu_i) / sigma_i^2
  Eigen::MatrixXd d_mu = (diff / sigma.square()).matrix().transpose();
  // d logp / d log_std_i = ((u_i - mu_i)/sigma_i)^2 - 1
  Eigen::VectorXd d_log_std = ((diff / sigma).square() - 1.0).matrix();
  return backprop_flat(ctx, d_mu, d_log_std);
}

Eigen::VectorXd GaussianPolicy::backprop_flat(const Approximator::Ctx& ctx,
                                              const Eigen::MatrixXd& d_mu,
                                              const Eigen::VectorXd& d_log_std) const {
  Eigen::VectorXd mean_grad = mean_fn_.backprop_flat(ctx, d_mu);
  Eigen::VectorXd flat(trainable_count());
  flat.head(mean_grad.size()) = mean_grad;
  flat.tail(action_dim()) = d_log_std;
  return flat;
}

Eigen::VectorXd GaussianPolicy::flat_params() const {
  Eigen::VectorXd mean_params = mean_fn_.flat_params();
  Eigen::VectorXd flat(trainable_count());
  flat.head(mean_params.size()) = mean_params;
  flat.tail(action_dim()) = log_std_;
  return flat;
}

void GaussianPolicy::set_flat_params(const Eigen::VectorXd& flat) {
  if (flat.size() != trainable_count()) {
    throw std::invalid_argument("GaussianPolicy::set_flat_params: size mismatch");
  }
  mean_fn_.set_flat_params(flat.head(flat.size() - action_dim()));
  log_std_ = flat.tail(action_dim());
}

void GaussianPolicy::clamp_log_std() {
  log_std_ = log_std_.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

ValueHead::ValueHead(Approximator fn) : fn_(std::move(fn)) {
  if (fn_.output_dim() != 1) {
    throw std::invalid_argument("ValueHead: representation must have scalar output");
  }
}

}  // namespace randpol
