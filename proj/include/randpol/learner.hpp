#ifndef RANDPOL_LEARNER_HPP_
#define RANDPOL_LEARNER_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "randpol/envs/batch_env.hpp"
#include "randpol/normalize.hpp"
#include "randpol/policy.hpp"
#include "randpol/rng.hpp"
#include "randpol/rollout.hpp"
#include "randpol/timing.hpp"

namespace randpol {

// Adam with bias correction over one flat parameter vector.
class Adam {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  explicit Adam(std::int64_t param_count)
      : m_(Eigen::VectorXd::Zero(param_count)), v_(Eigen::VectorXd::Zero(param_count)) {}

  void apply(Eigen::VectorXd& params, const Eigen::VectorXd& grads, double lr);

  std::int64_t step_count() const { return step_; }
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }

 private:
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  std::int64_t step_ = 0;
};

// rescales grads in place so the global L2 norm is at most max_norm;
// returns the pre-clip norm
double clip_grad_norm(Eigen::VectorXd& grads, double max_norm);

// baseline lr schedule: shrink by 1.5 when KL overshoots 2x target, grow by
// 1.5 when it undershoots half the target; clamped to [1e-6, 1e-2]
double kl_adaptive_lr(double current_lr, double mean_kl, double target_kl);

// minibatch rows gathered out of the rollout buffer; inputs are cached
// frozen features when available, normalized observations otherwise
struct Batch {
  Eigen::MatrixXd actor_input;
  Eigen::MatrixXd critic_input;
  bool inputs_are_features = false;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd behavior_means;    // optional: enables the parametric KL
  Eigen::VectorXd behavior_log_std;
  Eigen::VectorXd advantages;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd value_targets;
};

Batch gather_batch(const RolloutBuffer& buffer, const std::vector<int>& indices);

struct ValueLossResult {
  double loss = 0.0;
  Eigen::VectorXd grads;  // flat, trainable critic parameters only
};

// squared-error regression of V onto the stored value targets
ValueLossResult value_loss_and_grad(const ValueHead& critic, const Batch& batch);

struct SurrogateStats {
  double clip_fraction = 0.0;
  double mean_kl = 0.0;  // sample estimate, mean(logp_old - logp_new)
  // closed-form state-averaged KL(old || new) between the diagonal
  // Gaussians; low-variance signal for the baseline lr schedule. Only
  // filled when the batch carries behavior means.
  double param_kl = 0.0;
  double entropy = 0.0;
};

struct SurrogateLossResult {
  double loss = 0.0;
  Eigen::VectorXd grads;  // flat, trainable actor parameters only
  SurrogateStats stats;
};

// clipped surrogate objective with entropy bonus:
// loss = -mean(min(r*A, clip(r, 1-eps, 1+eps)*A)) - entropy_coef * H(policy).
// Samples whose clipped branch is active and binding contribute no ratio
// gradient. Throws on non-finite ratios (divergence signal).
SurrogateLossResult surrogate_loss_and_grad(const GaussianPolicy& policy, const Batch& batch,
                                            double clip_epsilon, double entropy_coef);

struct LearnerConfig {
  int horizon = 50;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int epochs = 5;
  int minibatches = 4;
  double clip_epsilon = 0.2;
  double entropy_coef = 0.01;
  double learning_rate = 3e-4;
  double grad_clip = 0.5;
  bool kl_adaptive = false;  // dense baseline only
  double kl_target = 0.01;
  bool normalize_adv = true;
};

// per-iteration scalars; learning time excludes environment stepping
struct UpdateReport {
  double value_loss = 0.0;
  double surrogate_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double actor_grad_norm = 0.0;
  double critic_grad_norm = 0.0;
  double learning_rate = 0.0;
  double collect_time_s = 0.0;
  double learn_time_s = 0.0;
  int transitions = 0;
  bool diverged = false;
};

// Owns the optimizer state and the rng streams of one training run and
// executes the full update step: collect, advantage estimation, then
// epoch/minibatch regression and surrogate ascent (critic first). Only the
// flat trainable vectors change; a divergent iteration restores the
// pre-iteration parameters and flags the report.
class Learner {
 public:
  Learner(LearnerConfig cfg, const GaussianPolicy& policy, const ValueHead& critic,
          std::uint64_t master_seed);

  UpdateReport train_iteration(GaussianPolicy& policy, ValueHead& critic, BatchEnv& envs,
                               ObservationNormalizer& obs_norm, RewardNormalizer& rew_norm,
                               Eigen::MatrixXd& current_raw_obs);

  double learning_rate() const { return lr_; }
  const LearnerConfig& config() const { return cfg_; }
  Rng& action_rng() { return action_rng_; }

  // accumulated collection/learning time across iterations
  const TimingProbe& timing() const { return timing_; }

 private:
  LearnerConfig cfg_;
  Adam actor_adam_;
  Adam critic_adam_;
  Rng action_rng_;
  Rng shuffle_rng_;
  double lr_;
  TimingProbe timing_;
};

}  // namespace randpol

#endif  // RANDPOL_LEARNER_HPP_
