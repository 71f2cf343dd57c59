#include "randpol/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace randpol {

namespace {
std::string fmt(double v) {
  // shortest round-trip representation
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}
}  // namespace

const char* RunMetrics::csv_header() {
  return "iteration,total_env_steps,episodes_completed,mean_episode_reward,"
         "mean_lin_tracking_reward,mean_yaw_tracking_reward,mean_fwd_vel_error,"
         "mean_yaw_rate_error,value_loss,surrogate_loss,entropy,approx_kl,clip_fraction,"
         "actor_grad_norm,critic_grad_norm,learning_rate,curriculum_v_hi,curriculum_w_hi,"
         "collect_time_s,learn_time_s";
}

std::string RunMetrics::to_csv_line(const MetricsRow& r) {
  std::string s;
  s += std::to_string(r.iteration) + ",";
  s += std::to_string(r.total_env_steps) + ",";
  s += std::to_string(r.episodes_completed) + ",";
  s += fmt(r.mean_episode_reward) + ",";
  s += fmt(r.mean_lin_tracking_reward) + ",";
  s += fmt(r.mean_yaw_tracking_reward) + ",";
  s += fmt(r.mean_fwd_vel_error) + ",";
  s += fmt(r.mean_yaw_rate_error) + ",";
  s += fmt(r.value_loss) + ",";
  s += fmt(r.surrogate_loss) + ",";
  s += fmt(r.entropy) + ",";
  s += fmt(r.approx_kl) + ",";
  s += fmt(r.clip_fraction) + ",";
  s += fmt(r.actor_grad_norm) + ",";
  s += fmt(r.critic_grad_norm) + ",";
  s += fmt(r.learning_rate) + ",";
  s += fmt(r.curriculum_v_hi) + ",";
  s += fmt(r.curriculum_w_hi) + ",";
  s += fmt(r.collect_time_s) + ",";
  s += fmt(r.learn_time_s);
  return s;
}

MetricsCsvWriter::MetricsCsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open metrics file: " + path);
  out_ << RunMetrics::csv_header() << "\n";
  out_.flush();
}

void MetricsCsvWriter::append(const MetricsRow& row) {
  out_ << RunMetrics::to_csv_line(row) << "\n";
  out_.flush();
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty metrics file: " + path);
  const std::string expect = RunMetrics::csv_header();
  if (line != expect && line != expect + "\r") {
    throw std::runtime_error("unexpected metrics header in " + path);
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 20) throw std::runtime_error("bad metrics row in " + path);
    MetricsRow r;
    r.iteration = std::stoi(cols[0]);
    r.total_env_steps = std::stoll(cols[1]);
    r.episodes_completed = std::stoi(cols[2]);
    r.mean_episode_reward = std::stod(cols[3]);
    r.mean_lin_tracking_reward = std::stod(cols[4]);
    r.mean_yaw_tracking_reward = std::stod(cols[5]);
    r.mean_fwd_vel_error = std::stod(cols[6]);
    r.mean_yaw_rate_error = std::stod(cols[7]);
    r.value_loss = std::stod(cols[8]);
    r.surrogate_loss = std::stod(cols[9]);
    r.entropy = std::stod(cols[10]);
    r.approx_kl = std::stod(cols[11]);
    r.clip_fraction = std::stod(cols[12]);
    r.actor_grad_norm = std::stod(cols[13]);
    r.critic_grad_norm = std::stod(cols[14]);
    r.learning_rate = std::stod(cols[15]);
    r.curriculum_v_hi = std::stod(cols[16]);
    r.curriculum_w_hi = std::stod(cols[17]);
    r.collect_time_s = std::stod(cols[18]);
    r.learn_time_s = std::stod(cols[19]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace randpol
