#ifndef RANDPOL_APPROXIMATOR_HPP_
#define RANDPOL_APPROXIMATOR_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>

#include "randpol/basis.hpp"
#include "randpol/dense_net.hpp"
#include "randpol/readout.hpp"

namespace randpol {

enum class ReprKind { kRandomized, kDense };

// Trainable function approximator behind both the policy mean and the value
// head: either a linear readout over a shared frozen random basis, or a
// fully-trainable dense net. The trainable parameters are exposed as one
// flat vector (readout W row-major, then bias; or dense layers in order) so
// the optimizer, gradient clipping and checkpointing treat both variants
// uniformly. Frozen basis parameters are never part of the flat vector.
class Approximator {
 public:
  // context carried from a forward pass to the matching backprop call
  struct Ctx {
    Eigen::MatrixXd features;  // randomized: N x feature_dim
    DenseTape tape;            // dense
  };

  Approximator(std::shared_ptr<const RandomBasis> basis, int output_dim);
  Approximator(DenseNet net);

  ReprKind kind() const { return kind_; }
  int input_dim() const;
  int output_dim() const { return output_dim_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, Ctx* ctx = nullptr) const;

  // randomized variant only: evaluate the readout on precomputed basis features
  Eigen::MatrixXd forward_from_features(const Eigen::MatrixXd& features) const;
  Eigen::MatrixXd compute_features(const Eigen::MatrixXd& x) const;

  // flat gradient of sum_n dy_n . y_n w.r.t. trainable parameters; for the
  // randomized variant this touches readout weights and biases only
  Eigen::VectorXd backprop_flat(const Ctx& ctx, const Eigen::MatrixXd& output_grad) const;

  std::int64_t trainable_count() const;
  std::int64_t total_count() const;  // trainable + frozen basis parameters

  Eigen::VectorXd flat_params() const;
  void set_flat_params(const Eigen::VectorXd& flat);

  // checksum of the frozen basis (0 for the dense variant)
  std::uint64_t frozen_checksum() const;

  const RandomBasis* basis() const { return basis_.get(); }
  std::shared_ptr<const RandomBasis> basis_ptr() const { return basis_; }
  const LinearReadout& readout() const;
  LinearReadout& readout();
  const DenseNet& net() const;
  DenseNet& net();

 private:
  ReprKind kind_;
  int output_dim_;
  std::shared_ptr<const RandomBasis> basis_;
  std::optional<LinearReadout> readout_;
  std::optional<DenseNet> net_;
};

}  // namespace randpol

#endif  // RANDPOL_APPROXIMATOR_HPP_
