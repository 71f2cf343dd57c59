#ifndef RANDPOL_POLICY_HPP_
#define RANDPOL_POLICY_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "randpol/approximator.hpp"
#include "randpol/rng.hpp"

namespace randpol {

// Diagonal Gaussian policy pi(u|x) = N(mu(x), diag(exp(2 log_std))). The
// covariance is state independent; log_std is trainable and clamped to
// [-5, 2] after every optimizer step. Flat trainable layout is
// [mean parameters..., log_std] so the log_std entries are always the last
// action_dim entries of the gradient.
class GaussianPolicy {
 public:
  static constexpr double kLogStdMin = -5.0;
  static constexpr double kLogStdMax = 2.0;

  GaussianPolicy(Approximator mean_fn, double log_std_init = 0.0);

  int action_dim() const { return mean_fn_.output_dim(); }
  int obs_dim() const { return mean_fn_.input_dim(); }
  ReprKind kind() const { return mean_fn_.kind(); }

  Eigen::VectorXd mean(const Eigen::VectorXd& x) const { return mean_fn_.forward(x); }
  Eigen::MatrixXd mean_batch(const Eigen::MatrixXd& x, Approximator::Ctx* ctx = nullptr) const {
    return mean_fn_.forward_batch(x, ctx);
  }

  // action = mu + sigma .* z, z ~ N(0, I); second element is the log density
  // of the returned action
  std::pair<Eigen::VectorXd, double> sample(const Eigen::VectorXd& x, Rng& rng) const;

  double log_prob(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

  // log densities for precomputed means, one row per sample
  Eigen::VectorXd log_prob_from_mean(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& u) const;

  // sum_i [0.5 log(2 pi e) + log sigma_i]; state independent
  double entropy() const;

  // gradient of log pi(u|x) w.r.t. the flat trainable parameters
  Eigen::VectorXd grad_log_prob(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

  // gradient plumbing for batched losses: maps (dL/dmu, dL/dlog_std) through
  // the representation into the flat layout
  Eigen::VectorXd backprop_flat(const Approximator::Ctx& ctx, const Eigen::MatrixXd& d_mu,
                                const Eigen::VectorXd& d_log_std) const;

  std::int64_t trainable_count() const { return mean_fn_.trainable_count() + action_dim(); }
  std::int64_t total_count() const { return mean_fn_.total_count() + action_dim(); }

  Eigen::VectorXd flat_params() const;
  void set_flat_params(const Eigen::VectorXd& flat);
  void clamp_log_std();

  const Eigen::VectorXd& log_std() const { return log_std_; }
  Eigen::VectorXd sigma() const { return log_std_.array().exp().matrix(); }
  const Approximator& mean_fn() const { return mean_fn_; }
  Approximator& mean_fn() { return mean_fn_; }

 private:
  Approximator mean_fn_;
  Eigen::VectorXd log_std_;
};

// State-value head V(x); scalar output per state.
class ValueHead {
 public:
  explicit ValueHead(Approximator fn);

  int obs_dim() const { return fn_.input_dim(); }
  ReprKind kind() const { return fn_.kind(); }

  double value(const Eigen::VectorXd& x) const { return fn_.forward(x)(0); }
  Eigen::VectorXd values_batch(const Eigen::MatrixXd& x, Approximator::Ctx* ctx = nullptr) const {
    return fn_.forward_batch(x, ctx).col(0);
  }

  std::int64_t trainable_count() const { return fn_.trainable_count(); }
  std::int64_t total_count() const { return fn_.total_count(); }

  Eigen::VectorXd flat_params() const { return fn_.flat_params(); }
  void set_flat_params(const Eigen::VectorXd& flat) { fn_.set_flat_params(flat); }

  const Approximator& fn() const { return fn_; }
  Approximator& fn() { return fn_; }

 private:
  Approximator fn_;
};

// trainable vs total parameter accounting over an actor-critic pair
inline std::int64_t count_trainable(const GaussianPolicy& policy, const ValueHead& value) {
  return policy.trainable_count() + value.trainable_count();
}
inline std::int64_t count_total(const GaussianPolicy& policy, const ValueHead& value) {
  return policy.total_count() + value.total_count();
}

}  // namespace randpol

#endif  // RANDPOL_POLICY_HPP_
