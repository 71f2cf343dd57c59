#include "randpol/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randpol {

RunningMeanStd::RunningMeanStd(int dim)
    : count_(0.0), mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw std::invalid_argument("RunningMeanStd: dim must be >= 1");
}

void RunningMeanStd::update(const Eigen::VectorXd& sample) {
  if (sample.size() != mean_.size()) {
    throw std::invalid_argument("RunningMeanStd::update: dimension mismatch");
  }
  count_ += 1.0;
  Eigen::VectorXd delta = sample - mean_;
  mean_ += delta / count_;
  m2_ += delta.cwiseProduct(sample - mean_);
}

void RunningMeanStd::update_batch(const Eigen::MatrixXd& samples) {
  if (samples.cols() != mean_.size()) {
    throw std::invalid_argument("RunningMeanStd::update_batch: dimension mismatch");
  }
  const double n = static_cast<double>(samples.rows());
  if (n == 0.0) return;
  Eigen::VectorXd batch_mean = samples.colwise().mean().transpose();
  Eigen::MatrixXd centered = samples.rowwise() - batch_mean.transpose();
  Eigen::VectorXd batch_m2 = centered.array().square().colwise().sum().transpose().matrix();

  const double total = count_ + n;
  Eigen::VectorXd delta = batch_mean - mean_;
  mean_ += delta * (n / total);
  m2_ += batch_m2 + delta.array().square().matrix() * (count_ * n / total);
  count_ = total;
}

void RunningMeanStd::merge(const RunningMeanStd& other) {
  if (other.dim() != dim()) {
    throw std::invalid_argument("RunningMeanStd::merge: dimension mismatch");
  }
  if (other.count_ == 0.0) return;
  const double total = count_ + other.count_;
  Eigen::VectorXd delta = other.mean_ - mean_;
  mean_ += delta * (other.count_ / total);
  m2_ += other.m2_ + delta.array().square().matrix() * (count_ * other.count_ / total);
  count_ = total;
}

Eigen::VectorXd RunningMeanStd::variance() const {
  if (count_ <= 0.0) return Eigen::VectorXd::Ones(mean_.size());
  return (m2_ / count_).cwiseMax(0.0);
}

void RunningMeanStd::restore(double count, Eigen::VectorXd mean, Eigen::VectorXd m2) {
  if (mean.size() != mean_.size() || m2.size() != m2_.size()) {
    throw std::invalid_argument("RunningMeanStd::restore: dimension mismatch");
  }
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

void ObservationNormalizer::observe(const Eigen::VectorXd& raw) {
  if (enabled_ && !frozen_) stats_.update(raw);
}

void ObservationNormalizer::observe_batch(const Eigen::MatrixXd& raw) {
  if (enabled_ && !frozen_) stats_.update_batch(raw);
}

Eigen::VectorXd ObservationNormalizer::normalize(const Eigen::VectorXd& raw) const {
  if (!enabled_) return raw;
  Eigen::ArrayXd denom = (stats_.variance().array() + kEps).sqrt();
  Eigen::ArrayXd z = (raw - stats_.mean()).array() / denom;
  return z.min(kClip).max(-kClip).matrix();
}

Eigen::MatrixXd ObservationNormalizer::normalize_batch(const Eigen::MatrixXd& raw) const {
  if (!enabled_) return raw;
  Eigen::ArrayXd denom = (stats_.variance().array() + kEps).sqrt();
  Eigen::ArrayXXd z =
      (raw.rowwise() - stats_.mean().transpose()).array().rowwise() / denom.transpose();
  return z.min(kClip).max(-kClip).matrix();
}

double RewardNormalizer::current_scale() const {
  return std::sqrt(stats_.variance()(0) + kEps);
}

Eigen::VectorXd RewardNormalizer::normalize_batch(const Eigen::VectorXd& raw_rewards,
                                                  const std::vector<std::uint8_t>& done) {
  if (!enabled_) return raw_rewards;
  if (raw_rewards.size() != returns_.size() ||
      done.size() != static_cast<std::size_t>(returns_.size())) {
    throw std::invalid_argument("RewardNormalizer::normalize_batch: batch size mismatch");
  }
  if (!frozen_) {
    returns_ = gamma_ * returns_ + raw_rewards;
    stats_.update_batch(returns_);
    for (Eigen::Index e = 0; e < returns_.size(); ++e) {
      if (done[e]) returns_(e) = 0.0;
    }
  }
  const double scale = current_scale();
  return (raw_rewards / scale).cwiseMax(-kClip).cwiseMin(kClip);
}

double RewardNormalizer::normalize(int env_index, double raw_reward, bool done) {
  if (!enabled_) return raw_reward;
  if (env_index < 0 || env_index >= returns_.size()) {
    throw std::invalid_argument("RewardNormalizer::normalize: bad env index");
  }
  if (!frozen_) {
    returns_(env_index) = gamma_ * returns_(env_index) + raw_reward;
    stats_.update(Eigen::VectorXd::Constant(1, returns_(env_index)));
    if (done) returns_(env_index) = 0.0;
  }
  return std::clamp(raw_reward / current_scale(), -kClip, kClip);
}

}  // namespace randpol
