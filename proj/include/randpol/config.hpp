#ifndef RANDPOL_CONFIG_HPP_
#define RANDPOL_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "randpol/envs/curriculum.hpp"
#include "randpol/envs/pendulum.hpp"
#include "randpol/envs/velocity_track.hpp"

namespace randpol {

enum class Algorithm { kRandpol, kDenseBaseline };
enum class EnvKind { kVelocityTrack, kPendulum };

std::string to_string(Algorithm a);
std::string to_string(EnvKind e);

// Every hyperparameter of a training run. The file format is flat
// `key = value` text ('#' comments); unknown keys are errors. Defaults that
// depend on the algorithm (horizon, learning_rate) or the env (episode_len)
// resolve after the algorithm/env keys are read, unless set explicitly.
struct TrainConfig {
  Algorithm algorithm = Algorithm::kRandpol;
  EnvKind env = EnvKind::kVelocityTrack;

  int num_envs = 64;
  int horizon = 50;  // 24 for the dense baseline
  int iterations = 1000;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int epochs = 5;
  int minibatches = 4;
  double clip_epsilon = 0.2;
  double entropy_coef = 0.01;
  double learning_rate = 3e-4;  // 1e-3 for the dense baseline
  double grad_clip = 0.5;
  double kl_target = 0.01;  // dense baseline lr schedule

  int feature_dim = 400;
  std::vector<int> basis_hidden = {500};
  std::vector<int> dense_dims = {512, 256, 128};
  double log_std_init = 0.0;

  bool normalize_obs = true;
  bool normalize_reward = true;
  bool normalize_advantages = true;

  std::uint64_t master_seed = 1;
  int checkpoint_every = 0;  // iterations; 0 = final checkpoint only

  VelocityTrackParams velocity;
  PendulumParams pendulum;
  CurriculumState curriculum_init;

  // resolved env dimensions
  int actor_obs_dim() const;
  int priv_obs_dim() const;
  int action_dim() const;
  int episode_len() const;

  // canonical flat-text serialization (fixed key order, full precision)
  std::string to_text() const;

  // hash of the fields that determine checkpoint compatibility: algorithm,
  // env kind, model dims and normalization toggles
  std::uint64_t structural_hash() const;
};

// Parses flat key=value text. Throws std::runtime_error listing every
// offending field (unknown keys, bad values, violated ranges).
TrainConfig parse_config_text(const std::string& text);
TrainConfig load_config_file(const std::string& path);

// defaults for an algorithm/env pair, with the dependent defaults
// (horizon, learning_rate) resolved
TrainConfig make_default_config(Algorithm algorithm, EnvKind env);

// applies `key=value` override strings on top of an existing config
void apply_overrides(TrainConfig& cfg, const std::vector<std::string>& overrides);

// re-validates a fully built config (used after programmatic edits)
void validate_config(const TrainConfig& cfg);

}  // namespace randpol

#endif  // RANDPOL_CONFIG_HPP_
