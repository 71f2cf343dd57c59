#include "randpol/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "randpol/envs/pendulum.hpp"
#include "randpol/envs/velocity_track.hpp"
#include "randpol/stats.hpp"

namespace randpol {

std::unique_ptr<BatchEnv> make_batch_env(const TrainConfig& cfg, int num_envs,
                                         std::shared_ptr<const CurriculumState> curriculum,
                                         std::uint64_t seed) {
  std::vector<std::unique_ptr<Env>> envs;
  envs.reserve(num_envs);
  for (int i = 0; i < num_envs; ++i) {
    if (cfg.env == EnvKind::kVelocityTrack) {
      envs.push_back(std::make_unique<VelocityTrackEnv>(cfg.velocity, curriculum));
    } else {
      envs.push_back(std::make_unique<PendulumEnv>(cfg.pendulum));
    }
  }
  return std::make_unique<BatchEnv>(std::move(envs), seed);
}

namespace {

LearnerConfig learner_config_from(const TrainConfig& cfg) {
  LearnerConfig lc;
  lc.horizon = cfg.horizon;
  lc.gamma = cfg.gamma;
  lc.gae_lambda = cfg.gae_lambda;
  lc.epochs = cfg.epochs;
  lc.minibatches = cfg.minibatches;
  lc.clip_epsilon = cfg.clip_epsilon;
  lc.entropy_coef = cfg.entropy_coef;
  lc.learning_rate = cfg.learning_rate;
  lc.grad_clip = cfg.grad_clip;
  lc.kl_adaptive = cfg.algorithm == Algorithm::kDenseBaseline;
  lc.kl_target = cfg.kl_target;
  lc.normalize_adv = cfg.normalize_advantages;
  return lc;
}

}  // namespace

Trainer::Trainer(TrainConfig cfg)
    : cfg_(std::move(cfg)),
      actor_seed_(derive_seed(cfg_.master_seed, SeedStream::kActorBasis)),
      critic_seed_(derive_seed(cfg_.master_seed, SeedStream::kCriticBasis)),
      models_(build_models(cfg_, actor_seed_, critic_seed_)),
      curriculum_(std::make_shared<CurriculumState>(cfg_.curriculum_init)),
      envs_(make_batch_env(cfg_, cfg_.num_envs, curriculum_, cfg_.master_seed)),
      obs_norm_(cfg_.priv_obs_dim(), cfg_.normalize_obs),
      rew_norm_(cfg_.num_envs, cfg_.gamma, cfg_.normalize_reward),
      learner_(learner_config_from(cfg_), *models_.policy, *models_.critic, cfg_.master_seed) {
  validate_config(cfg_);
  current_raw_obs_ = envs_->reset_all();
  obs_norm_.observe_batch(current_raw_obs_);
}

MetricsRow Trainer::build_row(int iteration, const UpdateReport& report) {
  MetricsRow row;
  row.iteration = iteration;
  row.total_env_steps = total_env_steps_;
  row.episodes_completed = static_cast<int>(episode_window_.size());
  if (!episode_window_.empty()) {
    double reward = 0, lin = 0, yaw = 0, ferr = 0, yerr = 0;
    for (const auto& rec : episode_window_) {
      reward += rec.total_reward;
      lin += rec.mean_lin_reward;
      yaw += rec.mean_yaw_reward;
      ferr += rec.mean_fwd_err;
      yerr += rec.mean_yaw_err;
    }
    const double n = static_cast<double>(episode_window_.size());
    row.mean_episode_reward = reward / n;
    row.mean_lin_tracking_reward = lin / n;
    row.mean_yaw_tracking_reward = yaw / n;
    row.mean_fwd_vel_error = ferr / n;
    row.mean_yaw_rate_error = yerr / n;
  }
  row.value_loss = report.value_loss;
  row.surrogate_loss = report.surrogate_loss;
  row.entropy = report.entropy;
  row.approx_kl = report.approx_kl;
  row.clip_fraction = report.clip_fraction;
  row.actor_grad_norm = report.actor_grad_norm;
  row.critic_grad_norm = report.critic_grad_norm;
  row.learning_rate = report.learning_rate;
  row.curriculum_v_hi = curriculum_->v_hi;
  row.curriculum_w_hi = curriculum_->w_hi;
  row.collect_time_s = report.collect_time_s;
  row.learn_time_s = report.learn_time_s;
  return row;
}

TrainResult Trainer::run(const std::string& out_dir, const IterCallback& callback) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg_out(out_dir + "/config.txt");
    cfg_out << cfg_.to_text();
  }
  MetricsCsvWriter csv(out_dir + "/metrics.csv");

  TrainResult result;
  result.metrics_path = out_dir + "/metrics.csv";
  result.checkpoint_path = out_dir + "/checkpoint_final.bin";

  for (int iter = 1; iter <= cfg_.iterations; ++iter) {
    UpdateReport report = learner_.train_iteration(*models_.policy, *models_.critic, *envs_,
                                                   obs_norm_, rew_norm_, current_raw_obs_);
    total_env_steps_ += report.transitions;

    auto records = envs_->drain_episode_records();
    if (cfg_.env == EnvKind::kVelocityTrack && !records.empty()) {
      double score = 0.0;
      for (const auto& rec : records) score += rec.tracking_score;
      *curriculum_ = curriculum_update(*curriculum_, score / records.size());
    }
    for (const auto& rec : records) {
      episode_window_.push_back(rec);
      if (episode_window_.size() > 20) episode_window_.pop_front();
    }

    MetricsRow row = build_row(iter, report);
    csv.append(row);
    result.iterations_run = iter;

    if (report.diverged) {
      result.diverged = true;
      break;
    }
    if (cfg_.checkpoint_every > 0 && iter % cfg_.checkpoint_every == 0) {
      char name[40];
      std::snprintf(name, sizeof(name), "/checkpoint_%06d.bin", iter);
      save(out_dir + name);
    }
    if (callback && !callback(iter, row)) break;
  }

  save(result.checkpoint_path);
  return result;
}

void Trainer::save(const std::string& path) const {
  save_checkpoint(path, cfg_, actor_seed_, critic_seed_, *models_.policy, *models_.critic,
                  obs_norm_, rew_norm_);
}

EvalReport evaluate_policy(const TrainConfig& cfg, const GaussianPolicy& policy,
                           const ObservationNormalizer& obs_norm, int episodes,
                           std::uint64_t eval_seed) {
  if (episodes < 1) throw std::invalid_argument("evaluate_policy: episodes must be >= 1");

  // frozen copy: evaluation never advances statistics
  ObservationNormalizer frozen = obs_norm;
  frozen.set_frozen(true);

  auto curriculum =
      std::make_shared<const CurriculumState>(curriculum_at_max(cfg.curriculum_init));
  auto envs = make_batch_env(cfg, episodes, curriculum,
                             derive_seed(eval_seed, SeedStream::kEvalEnv));

  const int obs_dim = envs->actor_obs_dim();
  Eigen::MatrixXd raw = envs->reset_all();
  const int steps = cfg.episode_len();
  for (int t = 0; t < steps; ++t) {
    Eigen::MatrixXd norm = frozen.normalize_batch(raw);
    Eigen::MatrixXd actions = policy.mean_batch(norm.leftCols(obs_dim));
    raw = envs->step(actions).obs;
  }

  auto records = envs->drain_episode_records();
  if (static_cast<int>(records.size()) != episodes) {
    throw std::logic_error("evaluate_policy: expected one episode per env");
  }
  EvalReport rep;
  rep.episodes = episodes;
  for (const auto& rec : records) {
    rep.mean_reward += rec.total_reward;
    rep.mean_lin_reward += rec.mean_lin_reward;
    rep.mean_yaw_reward += rec.mean_yaw_reward;
    rep.mean_fwd_err += rec.mean_fwd_err;
    rep.mean_yaw_err += rec.mean_yaw_err;
  }
  rep.mean_reward /= episodes;
  rep.mean_lin_reward /= episodes;
  rep.mean_yaw_reward /= episodes;
  rep.mean_fwd_err /= episodes;
  rep.mean_yaw_err /= episodes;
  return rep;
}

EvalReport evaluate_checkpoint(const std::string& checkpoint_path, int episodes,
                               std::uint64_t eval_seed) {
  LoadedCheckpoint ckpt = load_checkpoint(checkpoint_path);
  return evaluate_policy(ckpt.config, *ckpt.policy, *ckpt.obs_norm, episodes, eval_seed);
}

BenchResult bench_learning_time(EnvKind env, int iterations, std::uint64_t seed, int num_envs,
                                int horizon) {
  if (iterations < 1) throw std::invalid_argument("bench_learning_time: iterations must be >= 1");
  BenchResult out;
  out.iterations = iterations;
  out.num_envs = num_envs;
  out.horizon = horizon;

  for (Algorithm alg : {Algorithm::kRandpol, Algorithm::kDenseBaseline}) {
    TrainConfig cfg = make_default_config(alg, env);
    cfg.num_envs = num_envs;
    cfg.horizon = horizon;
    cfg.iterations = iterations;
    cfg.master_seed = seed;
    validate_config(cfg);

    Trainer trainer(cfg);
    std::vector<double> learn_times, collect_times;
    learn_times.reserve(iterations);
    const std::string tmp_dir =
        (std::filesystem::temp_directory_path() / ("randpol_bench_" + to_string(alg))).string();
    trainer.run(tmp_dir, [&](int, const MetricsRow& row) {
      learn_times.push_back(row.learn_time_s);
      collect_times.push_back(row.collect_time_s);
      return true;
    });

    const double learn_mean = sample_mean(learn_times);
    const double learn_std = learn_times.size() > 1 ? sample_std(learn_times) : 0.0;
    const double collect_mean = sample_mean(collect_times);
    if (alg == Algorithm::kRandpol) {
      out.randpol_learn_mean = learn_mean;
      out.randpol_learn_std = learn_std;
      out.randpol_collect_mean = collect_mean;
      out.randpol_trainable = count_trainable(trainer.policy(), trainer.critic());
      out.randpol_total = count_total(trainer.policy(), trainer.critic());
    } else {
      out.dense_learn_mean = learn_mean;
      out.dense_learn_std = learn_std;
      out.dense_collect_mean = collect_mean;
      out.dense_trainable = count_trainable(trainer.policy(), trainer.critic());
      out.dense_total = count_total(trainer.policy(), trainer.critic());
    }
  }
  return out;
}

}  // namespace randpol
