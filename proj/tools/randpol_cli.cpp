#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "randpol/checkpoint.hpp"
#include "randpol/compare.hpp"
#include "randpol/config.hpp"
#include "randpol/trainer.hpp"

namespace {

using namespace randpol;

// output paths resolve against $RANDPOL_OUT_ROOT when set
std::string resolve_out_dir(const std::string& dir) {
  const char* root = std::getenv("RANDPOL_OUT_ROOT");
  if (!root || dir.empty() || std::filesystem::path(dir).is_absolute()) return dir;
  return (std::filesystem::path(root) / dir).string();
}

TrainConfig config_from_cli(const std::string& config_path,
                            const std::vector<std::string>& overrides, bool seed_set,
                            std::uint64_t seed) {
  TrainConfig cfg = config_path.empty() ? TrainConfig{} : load_config_file(config_path);
  apply_overrides(cfg, overrides);
  if (seed_set) {
    cfg.master_seed = seed;
    validate_config(cfg);
  }
  return cfg;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
  }
  return seeds;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              bool seed_set, std::uint64_t seed, const std::string& out_dir) {
  TrainConfig cfg = config_from_cli(config_path, overrides, seed_set, seed);
  Trainer trainer(cfg);
  std::printf("training %s on %s: %d iterations, %d envs, horizon %d, seed %llu\n",
              to_string(cfg.algorithm).c_str(), to_string(cfg.env).c_str(), cfg.iterations,
              cfg.num_envs, cfg.horizon, static_cast<unsigned long long>(cfg.master_seed));

  const int report_every = std::max(1, cfg.iterations / 20);
  TrainResult res = trainer.run(resolve_out_dir(out_dir), [&](int iter, const MetricsRow& row) {
    if (iter % report_every == 0 || iter == 1) {
      std::printf("iter %5d | reward %9.3f | fwd_err %7.4f | vloss %9.4f | kl %8.5f\n", iter,
                  row.mean_episode_reward, row.mean_fwd_vel_error, row.value_loss, row.approx_kl);
      std::fflush(stdout);
    }
    return true;
  });

  if (res.diverged) {
    std::fprintf(stderr, "run diverged at iteration %d; partial metrics kept at %s\n",
                 res.iterations_run, res.metrics_path.c_str());
    return 2;
  }
  std::printf("done: metrics at %s, checkpoint at %s\n", res.metrics_path.c_str(),
              res.checkpoint_path.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, int episodes, std::uint64_t seed,
             const std::string& config_path) {
  std::optional<std::uint64_t> expect_hash;
  if (!config_path.empty()) expect_hash = load_config_file(config_path).structural_hash();
  LoadedCheckpoint ckpt = load_checkpoint(checkpoint, expect_hash);
  EvalReport rep = evaluate_policy(ckpt.config, *ckpt.policy, *ckpt.obs_norm, episodes, seed);
  std::printf("evaluation over %d episodes (%s, %s):\n", rep.episodes,
              to_string(ckpt.config.algorithm).c_str(), to_string(ckpt.config.env).c_str());
  std::printf("  mean episodic reward    %12.4f\n", rep.mean_reward);
  std::printf("  linear tracking reward  %12.4f\n", rep.mean_lin_reward);
  std::printf("  yaw tracking reward     %12.4f\n", rep.mean_yaw_reward);
  std::printf("  forward-velocity error  %12.4f\n", rep.mean_fwd_err);
  std::printf("  yaw-rate error          %12.4f\n", rep.mean_yaw_err);
  return 0;
}

int cmd_compare(const std::string& config_a, const std::string& config_b,
                const std::vector<std::string>& overrides, const std::string& seed_list,
                const std::string& out_dir, int episodes) {
  TrainConfig cfg_a = config_a.empty() ? make_default_config(Algorithm::kRandpol,
                                                             EnvKind::kVelocityTrack)
                                       : load_config_file(config_a);
  TrainConfig cfg_b = config_b.empty() ? make_default_config(Algorithm::kDenseBaseline,
                                                             EnvKind::kVelocityTrack)
                                       : load_config_file(config_b);
  apply_overrides(cfg_a, overrides);
  apply_overrides(cfg_b, overrides);

  std::vector<std::uint64_t> seeds = parse_seed_list(seed_list);
  CompareReport rep = run_compare(cfg_a, cfg_b, seeds, resolve_out_dir(out_dir), episodes);
  std::printf("%s", rep.text_table.c_str());
  std::printf("reports written under %s\n", resolve_out_dir(out_dir).c_str());
  return 0;
}

int cmd_count_params(const std::string& config_path, const std::vector<std::string>& overrides) {
  TrainConfig cfg = config_from_cli(config_path, overrides, false, 0);

  TrainConfig cfg_rp = cfg, cfg_dn = cfg;
  cfg_rp.algorithm = Algorithm::kRandpol;
  cfg_dn.algorithm = Algorithm::kDenseBaseline;
  ActorCritic rp = build_models(cfg_rp);
  ActorCritic dn = build_models(cfg_dn);

  const auto rp_train = count_trainable(*rp.policy, *rp.critic);
  const auto rp_total = count_total(*rp.policy, *rp.critic);
  const auto dn_train = count_trainable(*dn.policy, *dn.critic);
  const auto dn_total = count_total(*dn.policy, *dn.critic);

  std::printf("env %s: actor obs %d, critic obs %d, actions %d\n", to_string(cfg.env).c_str(),
              cfg.actor_obs_dim(), cfg.priv_obs_dim(), cfg.action_dim());
  std::printf("%-24s %14s %14s\n", "model", "trainable", "total");
  std::printf("%-24s %14lld %14lld\n", "randpol", static_cast<long long>(rp_train),
              static_cast<long long>(rp_total));
  std::printf("%-24s %14lld %14lld\n", "dense_baseline", static_cast<long long>(dn_train),
              static_cast<long long>(dn_total));
  std::printf("trainable ratio randpol/dense = %.6f\n",
              static_cast<double>(rp_train) / static_cast<double>(dn_train));
  return 0;
}

int cmd_bench(const std::string& env_name, int iterations, std::uint64_t seed, int num_envs,
              int horizon) {
  EnvKind env = env_name == "pendulum" ? EnvKind::kPendulum : EnvKind::kVelocityTrack;
  BenchResult r = bench_learning_time(env, iterations, seed, num_envs, horizon);
  std::printf("matched schedules on %s: %d iterations, %d envs, horizon %d\n", env_name.c_str(),
              r.iterations, r.num_envs, r.horizon);
  std::printf("%-16s %18s %18s %14s\n", "model", "learn time/iter", "collect time/iter",
              "trainable");
  std::printf("%-16s %11.6f +/- %.6f %14.6f %14lld\n", "randpol", r.randpol_learn_mean,
              r.randpol_learn_std, r.randpol_collect_mean,
              static_cast<long long>(r.randpol_trainable));
  std::printf("%-16s %11.6f +/- %.6f %14.6f %14lld\n", "dense_baseline", r.dense_learn_mean,
              r.dense_learn_std, r.dense_collect_mean, static_cast<long long>(r.dense_trainable));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randpol: randomized-readout actor-critic vs dense baseline, desk scale"};
  app.require_subcommand(1);

  std::string config_path, config_b_path, out_dir = "runs/run", checkpoint_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string seed_list = "1,2,3,4,5";
  int episodes = 16;
  std::string env_name = "velocity_track";
  int iterations = 100, num_envs = 16, horizon = 24;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (flat key = value text)");
    cmd->add_option("--set", overrides, "override, key=value (repeatable)");
  };

  CLI::App* train = app.add_subcommand("train", "train one run and write metrics + checkpoints");
  add_common(train);
  train->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
    seed_set = true;
  });
  train->add_option("--out-dir", out_dir, "output directory (under $RANDPOL_OUT_ROOT if set)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint with the policy mean");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval->add_option("--episodes", episodes, "number of evaluation episodes");
  eval->add_option("--seed", seed, "evaluation seed");
  eval->add_option("--config", config_path, "optional config to cross-check compatibility");

  CLI::App* compare = app.add_subcommand("compare", "multi-seed two-config comparison report");
  compare->add_option("--config", config_path, "config A (default: randpol velocity_track)");
  compare->add_option("--config2", config_b_path, "config B (default: dense_baseline velocity_track)");
  compare->add_option("--set", overrides, "override applied to both configs (repeatable)");
  compare->add_option("--seeds", seed_list, "comma-separated master seeds (>= 2)");
  compare->add_option("--out-dir", out_dir, "output directory");
  compare->add_option("--episodes", episodes, "evaluation episodes per run");

  CLI::App* count = app.add_subcommand("count-params", "trainable/total parameter accounting");
  add_common(count);

  CLI::App* bench = app.add_subcommand("bench", "matched-schedule learning-time comparison");
  bench->add_option("--env", env_name, "velocity_track | pendulum");
  bench->add_option("--iterations", iterations, "iterations per model");
  bench->add_option("--seed", seed, "master seed");
  bench->add_option("--num-envs", num_envs, "environments");
  bench->add_option("--horizon", horizon, "steps per iteration (both models)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, overrides, seed_set, seed, out_dir);
    if (eval->parsed()) return cmd_eval(checkpoint_path, episodes, seed, config_path);
    if (compare->parsed()) {
      return cmd_compare(config_path, config_b_path, overrides, seed_list, out_dir, episodes);
    }
    if (count->parsed()) return cmd_count_params(config_path, overrides);
    if (bench->parsed()) return cmd_bench(env_name, iterations, seed, num_envs, horizon);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
