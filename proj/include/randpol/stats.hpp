#ifndef RANDPOL_STATS_HPP_
#define RANDPOL_STATS_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace randpol {

struct MeanCi {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 95% two-sided t-interval half width
  int n = 0;
};

// two-sided 97.5% Student t quantile for df = 1..30, asymptotic beyond
inline double t_critical_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw std::invalid_argument("t_critical_975: df must be >= 1");
  return df <= 30 ? table[df - 1] : 1.96;
}

inline double sample_mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("sample_mean: empty vector");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_std: need >= 2 values");
  const double m = sample_mean(xs);
  double s2 = 0.0;
  for (double x : xs) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / static_cast<double>(xs.size() - 1));
}

// mean +/- t_{0.975, n-1} * s / sqrt(n)
inline MeanCi t_interval(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("t_interval: need >= 2 samples");
  MeanCi out;
  out.n = static_cast<int>(xs.size());
  out.mean = sample_mean(xs);
  out.ci_half_width =
      t_critical_975(out.n - 1) * sample_std(xs) / std::sqrt(static_cast<double>(out.n));
  return out;
}

}  // namespace randpol

#endif  // RANDPOL_STATS_HPP_
