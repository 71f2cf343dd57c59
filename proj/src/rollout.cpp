#include "randpol/rollout.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace randpol {

RolloutBuffer collect(BatchEnv& envs, const GaussianPolicy& policy, const ValueHead& critic,
                      int horizon, Rng& action_rng, ObservationNormalizer& obs_norm,
                      RewardNormalizer& rew_norm, Eigen::MatrixXd& current_raw_obs,
                      bool cache_features) {
  if (horizon < 1) throw std::invalid_argument("collect: horizon must be >= 1");
  const int n_envs = envs.num_envs();
  const int obs_dim = envs.actor_obs_dim();
  const int priv_dim = envs.priv_obs_dim();
  const int act_dim = envs.action_dim();
  const int total = n_envs * horizon;

  RolloutBuffer buf;
  buf.num_envs = n_envs;
  buf.horizon = horizon;
  buf.actor_obs.resize(total, obs_dim);
  buf.priv_obs.resize(total, priv_dim);
  buf.actions.resize(total, act_dim);
  buf.behavior_means.resize(total, act_dim);
  buf.behavior_log_std = policy.log_std();
  buf.rewards.resize(total);
  buf.values.resize(total);
  buf.log_probs.resize(total);
  buf.dones.assign(total, 0);
  buf.truncateds.assign(total, 0);
  buf.terminal_values = Eigen::VectorXd::Zero(total);
  buf.bootstrap_values.resize(n_envs);
  buf.has_features = cache_features && policy.kind() == ReprKind::kRandomized;
  if (buf.has_features) {
    buf.actor_features.resize(total, policy.mean_fn().basis()->feature_dim());
    buf.critic_features.resize(total, critic.fn().basis()->feature_dim());
  }

  const Eigen::ArrayXd sigma = policy.log_std().array().exp();
  const double lp_const = -policy.log_std().sum() - 0.5 * 1.8378770664093453 * act_dim;

  for (int t = 0; t < horizon; ++t) {
    Eigen::MatrixXd norm_priv = obs_norm.normalize_batch(current_raw_obs);
    Eigen::MatrixXd norm_actor = norm_priv.leftCols(obs_dim);

    Eigen::MatrixXd mu;
    Eigen::VectorXd vals;
    if (buf.has_features) {
      Eigen::MatrixXd f_a = policy.mean_fn().compute_features(norm_actor);
      Eigen::MatrixXd f_c = critic.fn().compute_features(norm_priv);
      mu = policy.mean_fn().forward_from_features(f_a);
      vals = critic.fn().forward_from_features(f_c).col(0);
      for (int e = 0; e < n_envs; ++e) {
        const int idx = buf.index(e, t);
        buf.actor_features.row(idx) = f_a.row(e);
        buf.critic_features.row(idx) = f_c.row(e);
      }
    } else {
      mu = policy.mean_batch(norm_actor);
      vals = critic.values_batch(norm_priv);
    }

    // sample actions env by env in fixed order
    Eigen::MatrixXd actions(n_envs, act_dim);
    Eigen::VectorXd log_probs(n_envs);
    for (int e = 0; e < n_envs; ++e) {
      double lp = lp_const;
      for (int i = 0; i < act_dim; ++i) {
        const double z = action_rng.normal();
        actions(e, i) = mu(e, i) + sigma(i) * z;
        lp += -0.5 * z * z;
      }
      log_probs(e) = lp;
    }

    BatchEnv::BatchStep step = envs.step(actions);
    Eigen::VectorXd scaled_rewards = rew_norm.normalize_batch(step.rewards, step.done);

    for (int e = 0; e < n_envs; ++e) {
      const int idx = buf.index(e, t);
      buf.actor_obs.row(idx) = norm_actor.row(e);
      buf.priv_obs.row(idx) = norm_priv.row(e);
      buf.actions.row(idx) = actions.row(e);
      buf.behavior_means.row(idx) = mu.row(e);
      buf.values(idx) = vals(e);
      buf.log_probs(idx) = log_probs(e);
      buf.rewards(idx) = scaled_rewards(e);
      buf.dones[idx] = step.done[e];
      buf.truncateds[idx] = step.truncated[e];
    }

    // statistics advance once per raw observation: pre-reset finals first,
    // then the post-step batch
    for (int e = 0; e < n_envs; ++e) {
      if (step.done[e]) obs_norm.observe(step.final_obs.row(e).transpose());
    }
    obs_norm.observe_batch(step.obs);

    // truncation bootstrap values from the pre-reset observations
    for (int e = 0; e < n_envs; ++e) {
      if (step.done[e] && step.truncated[e]) {
        Eigen::VectorXd nf = obs_norm.normalize(step.final_obs.row(e).transpose());
        buf.terminal_values(buf.index(e, t)) = critic.value(nf);
      }
    }

    current_raw_obs = step.obs;
  }

  Eigen::MatrixXd norm_next = obs_norm.normalize_batch(current_raw_obs);
  buf.bootstrap_values = critic.values_batch(norm_next);
  return buf;
}

void compute_gae(RolloutBuffer& buffer, double gamma, double lambda) {
  if (buffer.size() == 0 || buffer.values.size() != buffer.size()) {
    throw std::logic_error("compute_gae: buffer has not been collected");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("compute_gae: gamma in (0,1)");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("compute_gae: lambda in [0,1]");
  }
  buffer.advantages.resize(buffer.size());
  buffer.value_targets.resize(buffer.size());

  for (int e = 0; e < buffer.num_envs; ++e) {
    double carry = 0.0;
    for (int t = buffer.horizon - 1; t >= 0; --t) {
      const int idx = buffer.index(e, t);
      double next_value;
      if (buffer.dones[idx]) {
        // episode boundary: bootstrap only time-limit ends, cut the trace
        next_value = buffer.truncateds[idx] ? buffer.terminal_values(idx) : 0.0;
        carry = 0.0;
      } else {
        next_value = (t == buffer.horizon - 1) ? buffer.bootstrap_values(e)
                                               : buffer.values(buffer.index(e, t + 1));
      }
      const double delta = buffer.rewards(idx) + gamma * next_value - buffer.values(idx);
      carry = delta + gamma * lambda * carry;
      buffer.advantages(idx) = carry;
      buffer.value_targets(idx) = carry + buffer.values(idx);
    }
  }
  buffer.gae_ready = true;
}

void normalize_advantages(RolloutBuffer& buffer) {
  if (!buffer.gae_ready) {
    throw std::logic_error("normalize_advantages: compute_gae has not run");
  }
  const double mean = buffer.advantages.mean();
  const double var = (buffer.advantages.array() - mean).square().mean();
  const double std = std::sqrt(var);
  buffer.advantages = (buffer.advantages.array() - mean) / (std + 1e-8);
}

std::vector<std::vector<int>> minibatch_indices(int transition_count, int num_epochs,
                                                int num_minibatches, Rng& rng) {
  if (transition_count < 1 || num_epochs < 1 || num_minibatches < 1) {
    throw std::invalid_argument("minibatch_indices: counts must be >= 1");
  }
  if (num_minibatches > transition_count) {
    throw std::invalid_argument("minibatch_indices: more minibatches than transitions");
  }
  std::vector<int> order(transition_count);
  std::vector<std::vector<int>> batches;
  batches.reserve(static_cast<std::size_t>(num_epochs) * num_minibatches);

  for (int epoch = 0; epoch < num_epochs; ++epoch) {
    for (int i = 0; i < transition_count; ++i) order[i] = i;
    for (int i = transition_count - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    const int base = transition_count / num_minibatches;
    const int extra = transition_count % num_minibatches;
    int cursor = 0;
    for (int b = 0; b < num_minibatches; ++b) {
      const int len = base + (b < extra ? 1 : 0);
      batches.emplace_back(order.begin() + cursor, order.begin() + cursor + len);
      cursor += len;
    }
  }
  return batches;
}

void RolloutBuffer::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("RolloutBuffer::dump_csv: cannot open " + path);
  out << "env,t,reward,value,log_prob,done,truncated,terminal_value,advantage,value_target";
  for (int i = 0; i < actions.cols(); ++i) out << ",action_" << i;
  for (int i = 0; i < actor_obs.cols(); ++i) out << ",obs_" << i;
  out << "\n";
  char num[32];
  auto put = [&](double v) {
    std::snprintf(num, sizeof(num), "%.17g", v);
    out << num;
  };
  for (int e = 0; e < num_envs; ++e) {
    for (int t = 0; t < horizon; ++t) {
      const int idx = index(e, t);
      out << e << "," << t << ",";
      put(rewards(idx));
      out << ",";
      put(values(idx));
      out << ",";
      put(log_probs(idx));
      out << "," << int(dones[idx]) << "," << int(truncateds[idx]) << ",";
      put(terminal_values(idx));
      out << ",";
      put(gae_ready ? advantages(idx) : 0.0);
      out << ",";
      put(gae_ready ? value_targets(idx) : 0.0);
      for (int i = 0; i < actions.cols(); ++i) {
        out << ",";
        put(actions(idx, i));
      }
      for (int i = 0; i < actor_obs.cols(); ++i) {
        out << ",";
        put(actor_obs(idx, i));
      }
      out << "\n";
    }
  }
}

}  // namespace randpol
