#ifndef RANDPOL_COMPARE_HPP_
#define RANDPOL_COMPARE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "randpol/config.hpp"
#include "randpol/stats.hpp"
#include "randpol/trainer.hpp"

namespace randpol {

// per-seed outcome of one training run inside a comparison
struct RunSummary {
  std::uint64_t seed = 0;
  bool diverged = false;
  int iterations_run = 0;
  // means over the final 10% of iterations of the training metrics
  double final_reward = 0.0;
  double final_lin = 0.0;
  double final_yaw = 0.0;
  double final_fwd_err = 0.0;
  double final_yaw_err = 0.0;
  // deterministic post-training evaluation
  EvalReport eval;
  double mean_learn_time = 0.0;
  double mean_collect_time = 0.0;
  std::int64_t trainable = 0;
  std::int64_t total = 0;
};

struct AggregateMetric {
  std::string name;
  MeanCi a;
  MeanCi b;
};

struct CompareReport {
  std::vector<RunSummary> runs_a;
  std::vector<RunSummary> runs_b;
  std::vector<AggregateMetric> aggregates;
  std::int64_t trainable_a = 0, total_a = 0;
  std::int64_t trainable_b = 0, total_b = 0;
  double trainable_ratio = 0.0;  // a / b
  std::string text_table;
};

// Runs both configurations over every seed (each run fully isolated: own
// rng streams, own output directory), evaluates each final policy, and
// aggregates per-metric mean +/- 95% t-interval over seeds. Also writes
// per-iteration curve data (mean/CI across seeds) for plotting. Divergent
// seeds are reported in the summaries, never dropped.
CompareReport run_compare(const TrainConfig& cfg_a, const TrainConfig& cfg_b,
                          const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
                          int eval_episodes = 16);

}  // namespace randpol

#endif  // RANDPOL_COMPARE_HPP_
