#ifndef RANDPOL_METRICS_HPP_
#define RANDPOL_METRICS_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace randpol {

// One row per completed training iteration. Episode-level metrics are
// rolling means over the most recent completed episodes (window 20), so
// they stay defined on iterations where no episode ends. The two timing
// columns are always last; everything before them is a deterministic
// function of (config, master_seed).
struct MetricsRow {
  int iteration = 0;
  std::int64_t total_env_steps = 0;
  int episodes_completed = 0;
  double mean_episode_reward = 0.0;
  double mean_lin_tracking_reward = 0.0;
  double mean_yaw_tracking_reward = 0.0;
  double mean_fwd_vel_error = 0.0;
  double mean_yaw_rate_error = 0.0;
  double value_loss = 0.0;
  double surrogate_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double actor_grad_norm = 0.0;
  double critic_grad_norm = 0.0;
  double learning_rate = 0.0;
  double curriculum_v_hi = 0.0;
  double curriculum_w_hi = 0.0;
  double collect_time_s = 0.0;
  double learn_time_s = 0.0;
};

class RunMetrics {
 public:
  static const char* csv_header();
  static std::string to_csv_line(const MetricsRow& row);

  void append(const MetricsRow& row) { rows_.push_back(row); }
  const std::vector<MetricsRow>& rows() const { return rows_; }

 private:
  std::vector<MetricsRow> rows_;
};

// Incremental CSV writer: header on open, one flushed line per append.
class MetricsCsvWriter {
 public:
  explicit MetricsCsvWriter(const std::string& path);
  void append(const MetricsRow& row);

 private:
  std::ofstream out_;
};

// reads back a metrics CSV (used by the comparison report)
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

}  // namespace randpol

#endif  // RANDPOL_METRICS_HPP_
