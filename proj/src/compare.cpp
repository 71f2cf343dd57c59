#include "randpol/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "randpol/metrics.hpp"

namespace randpol {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

RunSummary run_one(const TrainConfig& base_cfg, std::uint64_t seed, const std::string& out_dir,
                   int eval_episodes) {
  TrainConfig cfg = base_cfg;
  cfg.master_seed = seed;
  Trainer trainer(cfg);
  TrainResult res = trainer.run(out_dir);

  RunSummary s;
  s.seed = seed;
  s.diverged = res.diverged;
  s.iterations_run = res.iterations_run;
  s.trainable = count_trainable(trainer.policy(), trainer.critic());
  s.total = count_total(trainer.policy(), trainer.critic());

  auto rows = read_metrics_csv(res.metrics_path);
  if (!rows.empty()) {
    const int window = std::max<int>(1, static_cast<int>(rows.size()) / 10);
    double reward = 0, lin = 0, yaw = 0, ferr = 0, yerr = 0, lt = 0, ct = 0;
    for (std::size_t i = rows.size() - window; i < rows.size(); ++i) {
      reward += rows[i].mean_episode_reward;
      lin += rows[i].mean_lin_tracking_reward;
      yaw += rows[i].mean_yaw_tracking_reward;
      ferr += rows[i].mean_fwd_vel_error;
      yerr += rows[i].mean_yaw_rate_error;
    }
    for (const auto& row : rows) {
      lt += row.learn_time_s;
      ct += row.collect_time_s;
    }
    s.final_reward = reward / window;
    s.final_lin = lin / window;
    s.final_yaw = yaw / window;
    s.final_fwd_err = ferr / window;
    s.final_yaw_err = yerr / window;
    s.mean_learn_time = lt / rows.size();
    s.mean_collect_time = ct / rows.size();
  }
  s.eval = evaluate_policy(cfg, trainer.policy(), trainer.obs_norm(), eval_episodes, seed);
  return s;
}

void write_curves_csv(const std::string& path, const std::vector<std::string>& metrics_paths) {
  std::vector<std::vector<MetricsRow>> runs;
  std::size_t min_len = SIZE_MAX;
  for (const auto& p : metrics_paths) {
    runs.push_back(read_metrics_csv(p));
    min_len = std::min(min_len, runs.back().size());
  }
  if (runs.empty() || min_len == 0 || min_len == SIZE_MAX) return;

  std::ofstream out(path);
  out << "iteration,reward_mean,reward_ci,lin_mean,lin_ci,yaw_mean,yaw_ci,"
         "fwd_err_mean,fwd_err_ci,yaw_err_mean,yaw_err_ci\n";
  char buf[64];
  for (std::size_t i = 0; i < min_len; ++i) {
    auto ci_of = [&](auto getter) {
      std::vector<double> vals;
      for (const auto& r : runs) vals.push_back(getter(r[i]));
      if (vals.size() < 2) return MeanCi{vals[0], 0.0, 1};
      return t_interval(vals);
    };
    MeanCi reward = ci_of([](const MetricsRow& r) { return r.mean_episode_reward; });
    MeanCi lin = ci_of([](const MetricsRow& r) { return r.mean_lin_tracking_reward; });
    MeanCi yaw = ci_of([](const MetricsRow& r) { return r.mean_yaw_tracking_reward; });
    MeanCi ferr = ci_of([](const MetricsRow& r) { return r.mean_fwd_vel_error; });
    MeanCi yerr = ci_of([](const MetricsRow& r) { return r.mean_yaw_rate_error; });
    std::snprintf(buf, sizeof(buf), "%d", runs[0][i].iteration);
    out << buf;
    for (const MeanCi& m : {reward, lin, yaw, ferr, yerr}) {
      std::snprintf(buf, sizeof(buf), ",%.10g,%.10g", m.mean, m.ci_half_width);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace

CompareReport run_compare(const TrainConfig& cfg_a, const TrainConfig& cfg_b,
                          const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
                          int eval_episodes) {
  if (seeds.size() < 2) {
    throw std::invalid_argument("run_compare: need >= 2 seeds for confidence intervals");
  }
  std::filesystem::create_directories(out_dir);

  CompareReport report;
  std::vector<std::string> paths_a, paths_b;
  for (std::uint64_t seed : seeds) {
    const std::string dir_a = out_dir + "/a_seed" + std::to_string(seed);
    const std::string dir_b = out_dir + "/b_seed" + std::to_string(seed);
    report.runs_a.push_back(run_one(cfg_a, seed, dir_a, eval_episodes));
    report.runs_b.push_back(run_one(cfg_b, seed, dir_b, eval_episodes));
    paths_a.push_back(dir_a + "/metrics.csv");
    paths_b.push_back(dir_b + "/metrics.csv");
  }

  report.trainable_a = report.runs_a.front().trainable;
  report.total_a = report.runs_a.front().total;
  report.trainable_b = report.runs_b.front().trainable;
  report.total_b = report.runs_b.front().total;
  report.trainable_ratio =
      static_cast<double>(report.trainable_a) / static_cast<double>(report.trainable_b);

  struct MetricDef {
    const char* name;
    double (*get)(const RunSummary&);
  };
  const MetricDef defs[] = {
      {"final_mean_reward", [](const RunSummary& s) { return s.final_reward; }},
      {"final_lin_tracking_reward", [](const RunSummary& s) { return s.final_lin; }},
      {"final_yaw_tracking_reward", [](const RunSummary& s) { return s.final_yaw; }},
      {"final_fwd_vel_error", [](const RunSummary& s) { return s.final_fwd_err; }},
      {"final_yaw_rate_error", [](const RunSummary& s) { return s.final_yaw_err; }},
      {"eval_mean_reward", [](const RunSummary& s) { return s.eval.mean_reward; }},
      {"eval_fwd_vel_error", [](const RunSummary& s) { return s.eval.mean_fwd_err; }},
      {"eval_yaw_rate_error", [](const RunSummary& s) { return s.eval.mean_yaw_err; }},
      {"learn_time_per_iter_s", [](const RunSummary& s) { return s.mean_learn_time; }},
      {"collect_time_per_iter_s", [](const RunSummary& s) { return s.mean_collect_time; }},
  };
  for (const auto& def : defs) {
    AggregateMetric m;
    m.name = def.name;
    std::vector<double> va, vb;
    for (const auto& s : report.runs_a) va.push_back(def.get(s));
    for (const auto& s : report.runs_b) vb.push_back(def.get(s));
    m.a = t_interval(va);
    m.b = t_interval(vb);
    report.aggregates.push_back(m);
  }

  write_curves_csv(out_dir + "/curves_a.csv", paths_a);
  write_curves_csv(out_dir + "/curves_b.csv", paths_b);

  // summary CSV: one row per metric
  {
    std::ofstream out(out_dir + "/comparison.csv");
    out << "metric,a_mean,a_ci95,b_mean,b_ci95\n";
    for (const auto& m : report.aggregates) {
      out << m.name << "," << fmt(m.a.mean) << "," << fmt(m.a.ci_half_width) << ","
          << fmt(m.b.mean) << "," << fmt(m.b.ci_half_width) << "\n";
    }
    out << "trainable_params," << report.trainable_a << ",0," << report.trainable_b << ",0\n";
    out << "total_params," << report.total_a << ",0," << report.total_b << ",0\n";
    out << "trainable_ratio_a_over_b," << fmt(report.trainable_ratio) << ",0,1,0\n";
  }

  // human-readable table
  {
    std::string t;
    auto line = [&](const std::string& name, const std::string& a, const std::string& b) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%-28s %22s %22s\n", name.c_str(), a.c_str(), b.c_str());
      t += buf;
    };
    line("metric", "A (" + to_string(cfg_a.algorithm) + ")",
         "B (" + to_string(cfg_b.algorithm) + ")");
    t += std::string(74, '-') + "\n";
    for (const auto& m : report.aggregates) {
      line(m.name, fmt(m.a.mean) + " +/- " + fmt(m.a.ci_half_width),
           fmt(m.b.mean) + " +/- " + fmt(m.b.ci_half_width));
    }
    line("trainable params", std::to_string(report.trainable_a),
         std::to_string(report.trainable_b));
    line("total params", std::to_string(report.total_a), std::to_string(report.total_b));
    line("trainable ratio (A/B)", fmt(report.trainable_ratio), "1");
    int div_a = 0, div_b = 0;
    for (const auto& s : report.runs_a) div_a += s.diverged ? 1 : 0;
    for (const auto& s : report.runs_b) div_b += s.diverged ? 1 : 0;
    line("diverged runs", std::to_string(div_a), std::to_string(div_b));
    report.text_table = t;

    std::ofstream out(out_dir + "/comparison.txt");
    out << t;
  }
  return report;
}

}  // namespace randpol
