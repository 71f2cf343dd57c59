#ifndef RANDPOL_ENVS_BATCH_ENV_HPP_
#define RANDPOL_ENVS_BATCH_ENV_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "randpol/envs/env.hpp"
#include "randpol/rng.hpp"

namespace randpol {

// Fixed-size batch of independent environments. Env i owns rng stream
// env_seed(master_seed, i), so the whole batch is a pure function of
// (master seed, action sequence) and adding environments never perturbs
// existing streams.
class BatchEnv {
 public:
  struct BatchStep {
    Eigen::MatrixXd obs;       // num_envs x priv_dim
    Eigen::VectorXd rewards;   // raw rewards
    std::vector<std::uint8_t> done;
    std::vector<std::uint8_t> truncated;
    Eigen::MatrixXd final_obs;  // rows valid where done
  };

  BatchEnv(std::vector<std::unique_ptr<Env>> envs, std::uint64_t master_seed);

  int num_envs() const { return static_cast<int>(envs_.size()); }
  int actor_obs_dim() const { return envs_.front()->actor_obs_dim(); }
  int priv_obs_dim() const { return envs_.front()->priv_obs_dim(); }
  int action_dim() const { return envs_.front()->action_dim(); }

  // resets every env; returns raw privileged observations
  Eigen::MatrixXd reset_all();

  // one action row per env; env faults are rethrown with the env index
  BatchStep step(const Eigen::MatrixXd& actions);

  // episode records completed since the last drain, in env order
  std::vector<EpisodeRecord> drain_episode_records();

  Env& env(int i) { return *envs_.at(i); }

 private:
  std::vector<std::unique_ptr<Env>> envs_;
  std::vector<Rng> rngs_;
  std::vector<EpisodeRecord> completed_;
};

}  // namespace randpol

#endif  // RANDPOL_ENVS_BATCH_ENV_HPP_
