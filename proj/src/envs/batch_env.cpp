#include "randpol/envs/batch_env.hpp"

#include <stdexcept>
#include <string>

namespace randpol {

BatchEnv::BatchEnv(std::vector<std::unique_ptr<Env>> envs, std::uint64_t master_seed)
    : envs_(std::move(envs)) {
  if (envs_.empty()) throw std::invalid_argument("BatchEnv: need at least one env");
  rngs_.reserve(envs_.size());
  for (int i = 0; i < static_cast<int>(envs_.size()); ++i) {
    rngs_.emplace_back(env_seed(master_seed, i));
  }
}

Eigen::MatrixXd BatchEnv::reset_all() {
  Eigen::MatrixXd obs(num_envs(), priv_obs_dim());
  for (int i = 0; i < num_envs(); ++i) {
    obs.row(i) = envs_[i]->reset(rngs_[i]).transpose();
  }
  return obs;
}

BatchEnv::BatchStep BatchEnv::step(const Eigen::MatrixXd& actions) {
  if (actions.rows() != num_envs() || actions.cols() != action_dim()) {
    throw std::invalid_argument("BatchEnv::step: action matrix shape mismatch");
  }
  BatchStep out;
  out.obs.resize(num_envs(), priv_obs_dim());
  out.rewards.resize(num_envs());
  out.done.assign(num_envs(), 0);
  out.truncated.assign(num_envs(), 0);
  out.final_obs = Eigen::MatrixXd::Zero(num_envs(), priv_obs_dim());

  for (int i = 0; i < num_envs(); ++i) {
    StepResult r;
    try {
      r = envs_[i]->step(actions.row(i).transpose(), rngs_[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("env " + std::to_string(i) + ": " + e.what());
    }
    out.obs.row(i) = r.obs.transpose();
    out.rewards(i) = r.reward;
    out.done[i] = r.done ? 1 : 0;
    out.truncated[i] = r.truncated ? 1 : 0;
    if (r.done) {
      out.final_obs.row(i) = r.final_obs.transpose();
      if (auto rec = envs_[i]->take_episode_record()) completed_.push_back(*rec);
    }
  }
  return out;
}

std::vector<EpisodeRecord> BatchEnv::drain_episode_records() {
  std::vector<EpisodeRecord> out;
  out.swap(completed_);
  return out;
}

}  // namespace randpol
