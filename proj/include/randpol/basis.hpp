#ifndef RANDPOL_BASIS_HPP_
#define RANDPOL_BASIS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace randpol {

// Frozen random feature network. Hidden parameters are drawn once from the
// seed and never change; trainable models are linear readouts over the
// feature vector this produces. ELU is applied after every frozen layer,
// so the feature map output is the activation of the final frozen layer.
//
// Weight/bias entries are drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)]
// per layer (tag "uniform_fan_in_v1"), deterministically from the seed: the
// same seed always rebuilds bit-identical parameters, which is what lets
// checkpoints store only the seed plus a checksum.
class RandomBasis {
 public:
  static constexpr const char* kDistributionTag = "uniform_fan_in_v1";

  RandomBasis(std::uint64_t seed, int input_dim, std::vector<int> hidden_widths,
              int feature_dim);

  // feature vector [phi_1(x), ..., phi_J(x)]
  Eigen::VectorXd features(const Eigen::VectorXd& x) const;

  // row-per-sample batch version: (N x input_dim) -> (N x feature_dim)
  Eigen::MatrixXd features_batch(const Eigen::MatrixXd& x) const;

  int input_dim() const { return input_dim_; }
  int feature_dim() const { return feature_dim_; }
  const std::vector<int>& hidden_widths() const { return hidden_widths_; }
  std::uint64_t seed() const { return seed_; }

  // number of frozen parameters (weights + biases over all layers)
  std::int64_t param_count() const;

  // checksum over all frozen parameter bytes in construction order; stable
  // for the lifetime of the object and across rebuilds from the same seed
  std::uint64_t checksum() const;

  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::uint64_t seed_;
  int input_dim_;
  std::vector<int> hidden_widths_;
  int feature_dim_;
  // layer l maps dims_[l] -> dims_[l+1]; weights_[l] is (dims_[l+1] x dims_[l])
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace randpol

#endif  // RANDPOL_BASIS_HPP_
