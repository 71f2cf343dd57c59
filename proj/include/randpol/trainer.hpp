#ifndef RANDPOL_TRAINER_HPP_
#define RANDPOL_TRAINER_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "randpol/checkpoint.hpp"
#include "randpol/config.hpp"
#include "randpol/envs/batch_env.hpp"
#include "randpol/learner.hpp"
#include "randpol/metrics.hpp"
#include "randpol/normalize.hpp"
#include "randpol/policy.hpp"

namespace randpol {

std::unique_ptr<BatchEnv> make_batch_env(const TrainConfig& cfg, int num_envs,
                                         std::shared_ptr<const CurriculumState> curriculum,
                                         std::uint64_t seed);

struct TrainResult {
  bool diverged = false;
  int iterations_run = 0;
  std::string metrics_path;
  std::string checkpoint_path;
};

struct EvalReport {
  int episodes = 0;
  double mean_reward = 0.0;
  double mean_lin_reward = 0.0;
  double mean_yaw_reward = 0.0;
  double mean_fwd_err = 0.0;
  double mean_yaw_err = 0.0;
};

// One training run: owns the models, normalizers, envs, curriculum and
// learner; writes metrics incrementally and checkpoints at the configured
// cadence. Fully deterministic given (config, master_seed) apart from the
// timing columns.
class Trainer {
 public:
  // return false from the callback to stop the run early (the callback runs
  // after the row is logged)
  using IterCallback = std::function<bool(int iteration, const MetricsRow& row)>;

  explicit Trainer(TrainConfig cfg);

  TrainResult run(const std::string& out_dir, const IterCallback& callback = {});

  void save(const std::string& path) const;

  const TrainConfig& config() const { return cfg_; }
  const GaussianPolicy& policy() const { return *models_.policy; }
  const ValueHead& critic() const { return *models_.critic; }
  GaussianPolicy& policy() { return *models_.policy; }
  ValueHead& critic() { return *models_.critic; }
  const ObservationNormalizer& obs_norm() const { return obs_norm_; }
  const CurriculumState& curriculum() const { return *curriculum_; }
  std::uint64_t actor_seed() const { return actor_seed_; }
  std::uint64_t critic_seed() const { return critic_seed_; }

 private:
  MetricsRow build_row(int iteration, const UpdateReport& report);

  TrainConfig cfg_;
  std::uint64_t actor_seed_;
  std::uint64_t critic_seed_;
  ActorCritic models_;
  std::shared_ptr<CurriculumState> curriculum_;
  std::unique_ptr<BatchEnv> envs_;
  ObservationNormalizer obs_norm_;
  RewardNormalizer rew_norm_;
  Learner learner_;
  Eigen::MatrixXd current_raw_obs_;
  std::deque<EpisodeRecord> episode_window_;  // rolling stats, most recent 20
  std::int64_t total_env_steps_ = 0;
};

// Deterministic evaluation: policy mean (no sampling), frozen normalizer,
// one env per episode, velocity-task commands drawn from the FINAL
// curriculum ranges. Raw (unnormalized) rewards.
EvalReport evaluate_policy(const TrainConfig& cfg, const GaussianPolicy& policy,
                           const ObservationNormalizer& obs_norm, int episodes,
                           std::uint64_t eval_seed);

EvalReport evaluate_checkpoint(const std::string& checkpoint_path, int episodes,
                               std::uint64_t eval_seed);

// matched-schedule timing comparison of the two model classes
struct BenchResult {
  int iterations = 0;
  int num_envs = 0;
  int horizon = 0;
  double randpol_learn_mean = 0.0, randpol_learn_std = 0.0;
  double dense_learn_mean = 0.0, dense_learn_std = 0.0;
  double randpol_collect_mean = 0.0;
  double dense_collect_mean = 0.0;
  std::int64_t randpol_trainable = 0, randpol_total = 0;
  std::int64_t dense_trainable = 0, dense_total = 0;
};

BenchResult bench_learning_time(EnvKind env, int iterations, std::uint64_t seed,
                                int num_envs = 16, int horizon = 24);

}  // namespace randpol

#endif  // RANDPOL_TRAINER_HPP_
