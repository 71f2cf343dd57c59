#ifndef RANDPOL_ENVS_ENV_HPP_
#define RANDPOL_ENVS_ENV_HPP_

#include <Eigen/Dense>
#include <optional>

#include "randpol/rng.hpp"

namespace randpol {

struct StepResult {
  Eigen::VectorXd obs;  // privileged observation after the step (post-reset when done)
  double reward = 0.0;
  bool done = false;
  bool truncated = false;     // episode cut by time limit, not failure
  Eigen::VectorXd final_obs;  // pre-reset observation, valid when done
};

// per-episode aggregates emitted when an episode completes
struct EpisodeRecord {
  double total_reward = 0.0;
  double mean_lin_reward = 0.0;  // weighted linear tracking reward component
  double mean_yaw_reward = 0.0;
  double mean_fwd_err = 0.0;  // mean |v - v_cmd|
  double mean_yaw_err = 0.0;  // mean |w - w_cmd|
  double tracking_score = 0.0;  // mean linear tracking kernel, drives the curriculum
  int length = 0;
};

// Single environment. The actor observation is always a prefix of the
// privileged observation, so one vector carries both views.
class Env {
 public:
  virtual ~Env() = default;

  virtual int actor_obs_dim() const = 0;
  virtual int priv_obs_dim() const = 0;
  virtual int action_dim() const = 0;

  // starts a new episode and returns the raw privileged observation
  virtual Eigen::VectorXd reset(Rng& rng) = 0;

  // advances one step; auto-resets on done
  virtual StepResult step(const Eigen::VectorXd& action, Rng& rng) = 0;

  // record of the episode that finished on the most recent done step
  virtual std::optional<EpisodeRecord> take_episode_record() = 0;
};

}  // namespace randpol

#endif  // RANDPOL_ENVS_ENV_HPP_
