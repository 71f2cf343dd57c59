#ifndef RANDPOL_DENSE_NET_HPP_
#define RANDPOL_DENSE_NET_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace randpol {

// Forward-pass record needed by DenseNet::backward: the layer inputs and
// pre-activations of one batch. Invalidated by any parameter change.
struct DenseTape {
  Eigen::MatrixXd input;                      // N x layer_dims[0]
  std::vector<Eigen::MatrixXd> pre_acts;      // per layer, N x fan_out
  std::vector<Eigen::MatrixXd> activations;   // per hidden layer, N x fan_out
  std::uint64_t net_version = 0;
};

struct DenseGrads {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Fully-trainable MLP with ELU on hidden layers and identity output.
// Used by the dense baseline; gradients are exact reverse mode.
class DenseNet {
 public:
  // layer_dims = input -> hidden... -> output; weights start at
  // U[-1/sqrt(fan_in), +1/sqrt(fan_in)] drawn from the seed
  DenseNet(std::uint64_t seed, std::vector<int> layer_dims);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // batch forward; fills the tape for a later backward call
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, DenseTape* tape = nullptr) const;

  // gradients of sum_n output_grad_n . y_n w.r.t. every weight and bias;
  // also returns d/d(input) when input_grad is non-null
  DenseGrads backward(const DenseTape& tape, const Eigen::MatrixXd& output_grad,
                      Eigen::MatrixXd* input_grad = nullptr) const;

  int input_dim() const { return layer_dims_.front(); }
  int output_dim() const { return layer_dims_.back(); }
  const std::vector<int>& layer_dims() const { return layer_dims_; }

  // sum over layers of (fan_in + 1) * fan_out; all parameters trainable
  std::int64_t param_count() const;

  // flat parameter view in layer order, each layer W row-major then b
  Eigen::VectorXd flat_params() const;
  void set_flat_params(const Eigen::VectorXd& flat);
  static Eigen::VectorXd flatten_grads(const DenseGrads& grads);

  std::uint64_t version() const { return version_; }

  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::vector<int> layer_dims_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  std::uint64_t version_ = 0;  // bumped by set_flat_params; guards stale tapes
};

}  // namespace randpol

#endif  // RANDPOL_DENSE_NET_HPP_
