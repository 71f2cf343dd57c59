#ifndef RANDPOL_NORMALIZE_HPP_
#define RANDPOL_NORMALIZE_HPP_

#include <Eigen/Dense>
#include <cstdint>

namespace randpol {

// Streaming per-dimension moments (Welford / Chan). variance() is the
// population variance m2/count. Merging two accumulators gives the same
// result as accumulating the concatenated stream.
class RunningMeanStd {
 public:
  explicit RunningMeanStd(int dim);

  void update(const Eigen::VectorXd& sample);
  void update_batch(const Eigen::MatrixXd& samples);  // one row per sample
  void merge(const RunningMeanStd& other);

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& m2() const { return m2_; }
  Eigen::VectorXd variance() const;

  // checkpoint plumbing
  void restore(double count, Eigen::VectorXd mean, Eigen::VectorXd m2);

 private:
  double count_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
};

// z-score observation normalization with a +/-10 clip. While training,
// every raw observation updates the statistics exactly once via observe();
// frozen mode (evaluation) turns normalize() into a fixed affine map.
class ObservationNormalizer {
 public:
  static constexpr double kClip = 10.0;
  static constexpr double kEps = 1e-8;

  explicit ObservationNormalizer(int dim, bool enabled = true)
      : stats_(dim), enabled_(enabled), frozen_(false) {}

  void observe(const Eigen::VectorXd& raw);
  void observe_batch(const Eigen::MatrixXd& raw);
  Eigen::VectorXd normalize(const Eigen::VectorXd& raw) const;
  Eigen::MatrixXd normalize_batch(const Eigen::MatrixXd& raw) const;

  void set_frozen(bool frozen) { frozen_ = frozen; }
  bool frozen() const { return frozen_; }
  bool enabled() const { return enabled_; }
  RunningMeanStd& stats() { return stats_; }
  const RunningMeanStd& stats() const { return stats_; }

 private:
  RunningMeanStd stats_;
  bool enabled_;
  bool frozen_;
};

// Scale-only reward normalization: tracks a per-env running discounted
// return and divides rewards by its standard deviation. No centering, so
// the optimal policy is unchanged; only conditioning improves. The
// statistics start from a weak unit-variance prior (count 1e-4) and update
// once per step with the whole env batch, so the scale is sane from the
// first step; scaled rewards are clipped to +/-10.
class RewardNormalizer {
 public:
  static constexpr double kEps = 1e-8;
  static constexpr double kClip = 10.0;
  static constexpr double kPriorCount = 1e-4;

  RewardNormalizer(int num_envs, double gamma, bool enabled = true)
      : stats_(1),
        returns_(Eigen::VectorXd::Zero(num_envs)),
        gamma_(gamma),
        enabled_(enabled),
        frozen_(false) {
    stats_.restore(kPriorCount, Eigen::VectorXd::Zero(1),
                   Eigen::VectorXd::Constant(1, kPriorCount));
  }

  // feeds one step of raw rewards for every env; returns the scaled rewards
  Eigen::VectorXd normalize_batch(const Eigen::VectorXd& raw_rewards,
                                  const std::vector<std::uint8_t>& done);

  // single-env convenience used by tests
  double normalize(int env_index, double raw_reward, bool done);

  void set_frozen(bool frozen) { frozen_ = frozen; }
  bool enabled() const { return enabled_; }
  RunningMeanStd& stats() { return stats_; }
  const RunningMeanStd& stats() const { return stats_; }
  void reset_returns() { returns_.setZero(); }

 private:
  double current_scale() const;

  RunningMeanStd stats_;
  Eigen::VectorXd returns_;
  double gamma_;
  bool enabled_;
  bool frozen_;
};

}  // namespace randpol

#endif  // RANDPOL_NORMALIZE_HPP_
