#ifndef RANDPOL_READOUT_HPP_
#define RANDPOL_READOUT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace randpol {

// Trainable linear layer over a frozen feature vector: y = W f + b.
struct LinearReadout {
  Eigen::MatrixXd weight;  // output_dim x feature_dim
  Eigen::VectorXd bias;    // output_dim

  LinearReadout(int output_dim, int feature_dim)
      : weight(Eigen::MatrixXd::Zero(output_dim, feature_dim)),
        bias(Eigen::VectorXd::Zero(output_dim)) {
    if (output_dim < 1 || feature_dim < 1) {
      throw std::invalid_argument("LinearReadout: dimensions must be >= 1");
    }
  }

  int output_dim() const { return static_cast<int>(weight.rows()); }
  int feature_dim() const { return static_cast<int>(weight.cols()); }

  // output_dim * (feature_dim + 1)
  std::int64_t param_count() const { return weight.size() + bias.size(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
    if (f.size() != weight.cols()) {
      throw std::invalid_argument("LinearReadout::apply: feature dimension mismatch");
    }
    return weight * f + bias;
  }

  // (N x feature_dim) -> (N x output_dim)
  Eigen::MatrixXd apply_batch(const Eigen::MatrixXd& f) const {
    if (f.cols() != weight.cols()) {
      throw std::invalid_argument("LinearReadout::apply_batch: feature dimension mismatch");
    }
    return (f * weight.transpose()).rowwise() + bias.transpose();
  }
};

}  // namespace randpol

#endif  // RANDPOL_READOUT_HPP_
