#ifndef RANDPOL_ROLLOUT_HPP_
#define RANDPOL_ROLLOUT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "randpol/envs/batch_env.hpp"
#include "randpol/normalize.hpp"
#include "randpol/policy.hpp"
#include "randpol/rng.hpp"

namespace randpol {

// On-policy rollout storage, env-major: the transition of env e at step t
// lives at row e*horizon + t, so each env's stream is contiguous and
// time-ordered. Observations and rewards are stored normalized, exactly as
// the policy and critic saw them; old log-probs are fixed at collection
// time and never recomputed.
struct RolloutBuffer {
  int num_envs = 0;
  int horizon = 0;

  Eigen::MatrixXd actor_obs;
  Eigen::MatrixXd priv_obs;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd behavior_means;    // policy mean at collection time
  Eigen::VectorXd behavior_log_std;  // policy log-std at collection time
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;
  Eigen::VectorXd log_probs;
  std::vector<std::uint8_t> dones;
  std::vector<std::uint8_t> truncateds;
  Eigen::VectorXd terminal_values;   // V(final obs) where truncated, else 0
  Eigen::VectorXd bootstrap_values;  // per env, V of the obs after the last step

  Eigen::VectorXd advantages;
  Eigen::VectorXd value_targets;
  bool gae_ready = false;

  // frozen features cached at collection time (randomized variant only)
  Eigen::MatrixXd actor_features;
  Eigen::MatrixXd critic_features;
  bool has_features = false;

  int size() const { return num_envs * horizon; }
  int index(int env, int t) const { return env * horizon + t; }

  // per-transition debug dump; columns documented in the header row
  void dump_csv(const std::string& path) const;
};

// Collects `horizon` steps from every env. Normalizer statistics advance
// exactly once per raw observation/reward; environments auto-reset on done
// and the pre-reset observation feeds the truncation bootstrap value.
// current_raw_obs carries the env state across iterations and is updated
// in place.
RolloutBuffer collect(BatchEnv& envs, const GaussianPolicy& policy, const ValueHead& critic,
                      int horizon, Rng& action_rng, ObservationNormalizer& obs_norm,
                      RewardNormalizer& rew_norm, Eigen::MatrixXd& current_raw_obs,
                      bool cache_features);

// delta_t = r_t + gamma*V(x_{t+1})*(1-done_t) - V(x_t) with truncated steps
// bootstrapped via the stored terminal value; advantages by the standard
// backward recursion with the trace cut at every episode boundary;
// value_targets = advantages + values.
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda);

// standardizes advantages to mean 0, std 1 over the whole buffer
// (population std, 1e-8 guard); value targets untouched
void normalize_advantages(RolloutBuffer& buffer);

// per epoch: a fresh uniform shuffle of [0, N) split into num_minibatches
// near-equal index batches; every index appears exactly once per epoch
std::vector<std::vector<int>> minibatch_indices(int transition_count, int num_epochs,
                                                int num_minibatches, Rng& rng);

}  // namespace randpol

#endif  // RANDPOL_ROLLOUT_HPP_
