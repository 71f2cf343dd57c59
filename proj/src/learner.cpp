#include "randpol/learner.hpp"

#include <cmath>
#include <stdexcept>

namespace randpol {

void Adam::apply(Eigen::VectorXd& params, const Eigen::VectorXd& grads, double lr) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("Adam::apply: shape mismatch");
  }
  step_ += 1;
  m_ = kBeta1 * m_ + (1.0 - kBeta1) * grads;
  v_ = kBeta2 * v_ + (1.0 - kBeta2) * grads.cwiseProduct(grads);
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
  params -= (lr / bc1) * m_.cwiseQuotient(((v_ / bc2).cwiseSqrt().array() + kEps).matrix());
}

double clip_grad_norm(Eigen::VectorXd& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw std::invalid_argument("clip_grad_norm: max_norm must be > 0");
  const double norm = grads.norm();
  if (norm > max_norm) grads *= max_norm / norm;
  return norm;
}

double kl_adaptive_lr(double current_lr, double mean_kl, double target_kl) {
  if (!(current_lr > 0.0)) throw std::invalid_argument("kl_adaptive_lr: lr must be > 0");
  double lr = current_lr;
  if (mean_kl > 2.0 * target_kl) {
    lr /= 1.5;
  } else if (mean_kl < 0.5 * target_kl) {
    lr *= 1.5;
  }
  return std::clamp(lr, 1e-6, 1e-2);
}

Batch gather_batch(const RolloutBuffer& buffer, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("gather_batch: empty index set");
  if (!buffer.gae_ready) throw std::logic_error("gather_batch: advantages not computed");
  const int n = static_cast<int>(indices.size());
  Batch b;
  b.inputs_are_features = buffer.has_features;
  const Eigen::MatrixXd& actor_src = buffer.has_features ? buffer.actor_features : buffer.actor_obs;
  const Eigen::MatrixXd& critic_src =
      buffer.has_features ? buffer.critic_features : buffer.priv_obs;
  b.actor_input.resize(n, actor_src.cols());
  b.critic_input.resize(n, critic_src.cols());
  b.actions.resize(n, buffer.actions.cols());
  b.behavior_means.resize(buffer.behavior_means.rows() > 0 ? n : 0, buffer.actions.cols());
  b.behavior_log_std = buffer.behavior_log_std;
  b.advantages.resize(n);
  b.old_log_probs.resize(n);
  b.value_targets.resize(n);
  for (int i = 0; i < n; ++i) {
    const int idx = indices[i];
    b.actor_input.row(i) = actor_src.row(idx);
    b.critic_input.row(i) = critic_src.row(idx);
    b.actions.row(i) = buffer.actions.row(idx);
    if (b.behavior_means.rows() > 0) b.behavior_means.row(i) = buffer.behavior_means.row(idx);
    b.advantages(i) = buffer.advantages(idx);
    b.old_log_probs(i) = buffer.log_probs(idx);
    b.value_targets(i) = buffer.value_targets(idx);
  }
  return b;
}

ValueLossResult value_loss_and_grad(const ValueHead& critic, const Batch& batch) {
  const int n = static_cast<int>(batch.value_targets.size());
  if (n == 0) throw std::invalid_argument("value_loss_and_grad: empty batch");

  Approximator::Ctx ctx;
  Eigen::VectorXd v;
  if (batch.inputs_are_features) {
    ctx.features = batch.critic_input;
    v = critic.fn().forward_from_features(batch.critic_input).col(0);
  } else {
    v = critic.values_batch(batch.critic_input, &ctx);
  }
  Eigen::VectorXd err = v - batch.value_targets;

  ValueLossResult out;
  out.loss = err.squaredNorm() / n;
  Eigen::MatrixXd d_v = (2.0 / n) * err;
  out.grads = critic.fn().backprop_flat(ctx, d_v);
  return out;
}

SurrogateLossResult surrogate_loss_and_grad(const GaussianPolicy& policy, const Batch& batch,
                                            double clip_epsilon, double entropy_coef) {
  const int n = static_cast<int>(batch.advantages.size());
  if (n == 0) throw std::invalid_argument("surrogate_loss_and_grad: empty batch");
  if (!(clip_epsilon > 0.0)) {
    throw std::invalid_argument("surrogate_loss_and_grad: epsilon must be > 0");
  }

  Approximator::Ctx ctx;
  Eigen::MatrixXd mu;
  if (batch.inputs_are_features) {
    ctx.features = batch.actor_input;
    mu = policy.mean_fn().forward_from_features(batch.actor_input);
  } else {
    mu = policy.mean_batch(batch.actor_input, &ctx);
  }

  Eigen::VectorXd lp_new = policy.log_prob_from_mean(mu, batch.actions);
  Eigen::ArrayXd log_ratio = (lp_new - batch.old_log_probs).array();
  Eigen::ArrayXd ratio = log_ratio.exp();
  if (!ratio.isFinite().all()) {
    throw std::runtime_error("surrogate_loss_and_grad: non-finite probability ratio");
  }

  const Eigen::ArrayXd& adv = batch.advantages.array();
  Eigen::ArrayXd clipped = ratio.min(1.0 + clip_epsilon).max(1.0 - clip_epsilon);
  Eigen::ArrayXd term_unclipped = ratio * adv;
  Eigen::ArrayXd term_clipped = clipped * adv;
  Eigen::ArrayXd term = term_unclipped.min(term_clipped);

  SurrogateLossResult out;
  const double entropy = policy.entropy();
  out.loss = -term.mean() - entropy_coef * entropy;
  out.stats.entropy = entropy;
  out.stats.mean_kl = -log_ratio.mean();
  out.stats.clip_fraction = ((ratio - 1.0).abs() > clip_epsilon).cast<double>().mean();
  if (batch.behavior_means.rows() == n && batch.behavior_log_std.size() == mu.cols()) {
    // state-averaged KL(old || new) for diagonal Gaussians
    const Eigen::ArrayXd ls_old = batch.behavior_log_std.array();
    const Eigen::ArrayXd ls_new = policy.log_std().array();
    const Eigen::ArrayXd var_old = (2.0 * ls_old).exp();
    const Eigen::ArrayXd inv_var_new = (-2.0 * ls_new).exp();
    Eigen::ArrayXXd mean_sq = (mu - batch.behavior_means).array().square();
    double acc = n * ((ls_new - ls_old) + 0.5 * var_old * inv_var_new - 0.5).sum();
    acc += 0.5 * (mean_sq.rowwise() * inv_var_new.transpose()).sum();
    out.stats.param_kl = acc / n;
  }

  // ratio gradient flows only where the unclipped branch attains the min
  Eigen::ArrayXd d_lp = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (term_unclipped(i) <= term_clipped(i)) d_lp(i) = -(ratio(i) * adv(i)) / n;
  }

  const Eigen::ArrayXd sigma = policy.log_std().array().exp();
  Eigen::ArrayXXd diff = (batch.actions - mu).array();
  // d logp / d mu = diff / sigma^2, d logp / d log_std = (diff/sigma)^2 - 1
  Eigen::MatrixXd d_mu =
      ((diff.rowwise() / sigma.square().transpose()).colwise() * d_lp).matrix();
  Eigen::ArrayXXd z2 = (diff.rowwise() / sigma.transpose()).square();
  Eigen::VectorXd d_log_std = ((z2 - 1.0).colwise() * d_lp).colwise().sum().transpose().matrix();
  d_log_std.array() -= entropy_coef;  // d(-c H)/d log_std = -c

  out.grads = policy.backprop_flat(ctx, d_mu, d_log_std);
  return out;
}

Learner::Learner(LearnerConfig cfg, const GaussianPolicy& policy, const ValueHead& critic,
                 std::uint64_t master_seed)
    : cfg_(cfg),
      actor_adam_(policy.trainable_count()),
      critic_adam_(critic.trainable_count()),
      action_rng_(derive_seed(master_seed, SeedStream::kActionSampling)),
      shuffle_rng_(derive_seed(master_seed, SeedStream::kMinibatchShuffle)),
      lr_(cfg.learning_rate) {}

UpdateReport Learner::train_iteration(GaussianPolicy& policy, ValueHead& critic, BatchEnv& envs,
                                      ObservationNormalizer& obs_norm,
                                      RewardNormalizer& rew_norm,
                                      Eigen::MatrixXd& current_raw_obs) {
  UpdateReport report;
  report.transitions = envs.num_envs() * cfg_.horizon;

  timing_.begin("collect");
  RolloutBuffer buffer =
      collect(envs, policy, critic, cfg_.horizon, action_rng_, obs_norm, rew_norm,
              current_raw_obs, /*cache_features=*/policy.kind() == ReprKind::kRandomized);
  report.collect_time_s = timing_.end("collect");

  timing_.begin("learn");
  compute_gae(buffer, cfg_.gamma, cfg_.gae_lambda);
  if (cfg_.normalize_adv) normalize_advantages(buffer);

  const Eigen::VectorXd actor_backup = policy.flat_params();
  const Eigen::VectorXd critic_backup = critic.flat_params();

  auto batches = minibatch_indices(buffer.size(), cfg_.epochs, cfg_.minibatches, shuffle_rng_);

  double sum_vloss = 0.0, sum_sloss = 0.0, sum_entropy = 0.0, sum_kl = 0.0;
  double sum_clipfrac = 0.0, sum_anorm = 0.0, sum_cnorm = 0.0;
  int updates = 0;
  bool diverged = false;

  for (const auto& idx : batches) {
    Batch batch = gather_batch(buffer, idx);

    try {
      // critic first, then actor (one minibatch each)
      ValueLossResult vres = value_loss_and_grad(critic, batch);
      SurrogateLossResult sres =
          surrogate_loss_and_grad(policy, batch, cfg_.clip_epsilon, cfg_.entropy_coef);
      if (!std::isfinite(vres.loss) || !std::isfinite(sres.loss)) {
        throw std::runtime_error("non-finite loss");
      }

      if (cfg_.kl_adaptive) lr_ = kl_adaptive_lr(lr_, sres.stats.param_kl, cfg_.kl_target);

      sum_cnorm += clip_grad_norm(vres.grads, cfg_.grad_clip);
      Eigen::VectorXd critic_params = critic.flat_params();
      critic_adam_.apply(critic_params, vres.grads, lr_);
      critic.set_flat_params(critic_params);

      sum_anorm += clip_grad_norm(sres.grads, cfg_.grad_clip);
      Eigen::VectorXd actor_params = policy.flat_params();
      actor_adam_.apply(actor_params, sres.grads, lr_);
      policy.set_flat_params(actor_params);
      policy.clamp_log_std();

      sum_vloss += vres.loss;
      sum_sloss += sres.loss;
      sum_entropy += sres.stats.entropy;
      sum_kl += sres.stats.mean_kl;
      sum_clipfrac += sres.stats.clip_fraction;
      updates += 1;
    } catch (const std::runtime_error&) {
      diverged = true;
      break;
    }
  }

  if (diverged) {
    policy.set_flat_params(actor_backup);
    critic.set_flat_params(critic_backup);
    report.diverged = true;
  } else if (updates > 0) {
    report.value_loss = sum_vloss / updates;
    report.surrogate_loss = sum_sloss / updates;
    report.entropy = sum_entropy / updates;
    report.approx_kl = sum_kl / updates;
    report.clip_fraction = sum_clipfrac / updates;
    report.actor_grad_norm = sum_anorm / updates;
    report.critic_grad_norm = sum_cnorm / updates;
  }
  report.learning_rate = lr_;
  report.learn_time_s = timing_.end("learn");
  return report;
}

}  // namespace randpol
