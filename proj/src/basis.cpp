#include "randpol/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "randpol/activation.hpp"
#include "randpol/hashing.hpp"
#include "randpol/rng.hpp"

namespace randpol {

RandomBasis::RandomBasis(std::uint64_t seed, int input_dim,
                         std::vector<int> hidden_widths, int feature_dim)
    : seed_(seed),
      input_dim_(input_dim),
      hidden_widths_(std::move(hidden_widths)),
      feature_dim_(feature_dim) {
  if (input_dim_ < 1 || feature_dim_ < 1) {
    throw std::invalid_argument("RandomBasis: dimensions must be >= 1");
  }
  for (int w : hidden_widths_) {
    if (w < 1) throw std::invalid_argument("RandomBasis: hidden widths must be >= 1");
  }

  std::vector<int> dims;
  dims.push_back(input_dim_);
  for (int w : hidden_widths_) dims.push_back(w);
  dims.push_back(feature_dim_);

  Rng rng(seed_);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    // row-major draw order fixes the sequence for a given seed
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = rng.uniform(-bound, bound);
      }
    }
    Eigen::VectorXd b(fan_out);
    for (int r = 0; r < fan_out; ++r) b(r) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

Eigen::VectorXd RandomBasis::features(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim_) {
    throw std::invalid_argument("RandomBasis::features: input dimension mismatch");
  }
  Eigen::VectorXd h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = (weights_[l] * h + biases_[l]).unaryExpr([](double z) { return elu(z); });
  }
  return h;
}

Eigen::MatrixXd RandomBasis::features_batch(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) {
    throw std::invalid_argument("RandomBasis::features_batch: input dimension mismatch");
  }
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    h = ((h * weights_[l].transpose()).rowwise() + biases_[l].transpose())
            .unaryExpr([](double z) { return elu(z); });
  }
  return h;
}

std::int64_t RandomBasis::param_count() const {
  std::int64_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

std::uint64_t RandomBasis::checksum() const {
  Fnv1a h;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    // row-major to match draw order
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        h.update_double(weights_[l](r, c));
      }
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) {
      h.update_double(biases_[l](r));
    }
  }
  return h.digest();
}

}  // namespace randpol
