#include "randpol/dense_net.hpp"

#include <cmath>
#include <stdexcept>

#include "randpol/activation.hpp"
#include "randpol/rng.hpp"

namespace randpol {

DenseNet::DenseNet(std::uint64_t seed, std::vector<int> layer_dims)
    : layer_dims_(std::move(layer_dims)) {
  if (layer_dims_.size() < 2) {
    throw std::invalid_argument("DenseNet: need at least input and output dims");
  }
  for (int d : layer_dims_) {
    if (d < 1) throw std::invalid_argument("DenseNet: dimensions must be >= 1");
  }
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_dims_.size(); ++l) {
    const int fan_in = layer_dims_[l];
    const int fan_out = layer_dims_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    Eigen::VectorXd b(fan_out);
    for (int r = 0; r < fan_out; ++r) b(r) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

Eigen::VectorXd DenseNet::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    throw std::invalid_argument("DenseNet::forward: input dimension mismatch");
  }
  Eigen::VectorXd h = x;
  const std::size_t last = weights_.size() - 1;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::VectorXd z = weights_[l] * h + biases_[l];
    h = (l == last) ? z : Eigen::VectorXd(z.unaryExpr([](double v) { return elu(v); }));
  }
  return h;
}

Eigen::MatrixXd DenseNet::forward_batch(const Eigen::MatrixXd& x, DenseTape* tape) const {
  if (x.cols() != input_dim()) {
    throw std::invalid_argument("DenseNet::forward_batch: input dimension mismatch");
  }
  if (tape) {
    tape->input = x;
    tape->pre_acts.clear();
    tape->activations.clear();
    tape->net_version = version_;
  }
  Eigen::MatrixXd h = x;
  const std::size_t last = weights_.size() - 1;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (h * weights_[l].transpose()).rowwise() + biases_[l].transpose();
    if (tape) tape->pre_acts.push_back(z);
    if (l == last) {
      h = std::move(z);
    } else {
      h = z.unaryExpr([](double v) { return elu(v); });
      if (tape) tape->activations.push_back(h);
    }
  }
  return h;
}

DenseGrads DenseNet::backward(const DenseTape& tape, const Eigen::MatrixXd& output_grad,
                              Eigen::MatrixXd* input_grad) const {
  if (tape.net_version != version_) {
    throw std::logic_error("DenseNet::backward: tape is stale (parameters changed)");
  }
  if (tape.pre_acts.size() != weights_.size() || output_grad.rows() != tape.input.rows() ||
      output_grad.cols() != output_dim()) {
    throw std::invalid_argument("DenseNet::backward: tape/grad shape mismatch");
  }
  DenseGrads grads;
  grads.weights.resize(weights_.size());
  grads.biases.resize(weights_.size());

  Eigen::MatrixXd dz = output_grad;  // output layer is identity
  for (int l = static_cast<int>(weights_.size()) - 1; l >= 0; --l) {
    const Eigen::MatrixXd& layer_in = (l == 0) ? tape.input : tape.activations[l - 1];
    grads.weights[l] = dz.transpose() * layer_in;
    grads.biases[l] = dz.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd da = dz * weights_[l];
      dz = da.cwiseProduct(
          tape.pre_acts[l - 1].unaryExpr([](double z) { return elu_grad(z); }));
    } else if (input_grad) {
      *input_grad = dz * weights_[0];
    }
  }
  return grads;
}

std::int64_t DenseNet::param_count() const {
  std::int64_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

Eigen::VectorXd DenseNet::flat_params() const {
  Eigen::VectorXd flat(param_count());
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) flat(k++) = weights_[l](r, c);
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) flat(k++) = biases_[l](r);
  }
  return flat;
}

void DenseNet::set_flat_params(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("DenseNet::set_flat_params: size mismatch");
  }
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) weights_[l](r, c) = flat(k++);
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) biases_[l](r) = flat(k++);
  }
  ++version_;
}

Eigen::VectorXd DenseNet::flatten_grads(const DenseGrads& grads) {
  std::int64_t n = 0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    n += grads.weights[l].size() + grads.biases[l].size();
  }
  Eigen::VectorXd flat(n);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < grads.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < grads.weights[l].cols(); ++c) {
        flat(k++) = grads.weights[l](r, c);
      }
    }
    for (Eigen::Index r = 0; r < grads.biases[l].size(); ++r) flat(k++) = grads.biases[l](r);
  }
  return flat;
}

}  // namespace randpol
