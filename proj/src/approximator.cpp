#include "randpol/approximator.hpp"

#include <stdexcept>
#include <utility>

namespace randpol {

Approximator::Approximator(std::shared_ptr<const RandomBasis> basis, int output_dim)
    : kind_(ReprKind::kRandomized),
      output_dim_(output_dim),
      basis_(std::move(basis)),
      readout_(LinearReadout(output_dim, basis_ ? basis_->feature_dim() : 0)) {
  if (!basis_) throw std::invalid_argument("Approximator: null basis");
}

Approximator::Approximator(DenseNet net)
    : kind_(ReprKind::kDense), output_dim_(net.output_dim()), net_(std::move(net)) {}

int Approximator::input_dim() const {
  return kind_ == ReprKind::kRandomized ? basis_->input_dim() : net_->input_dim();
}

Eigen::VectorXd Approximator::forward(const Eigen::VectorXd& x) const {
  if (kind_ == ReprKind::kRandomized) return readout_->apply(basis_->features(x));
  return net_->forward(x);
}

Eigen::MatrixXd Approximator::forward_batch(const Eigen::MatrixXd& x, Ctx* ctx) const {
  if (kind_ == ReprKind::kRandomized) {
    Eigen::MatrixXd f = basis_->features_batch(x);
    Eigen::MatrixXd y = readout_->apply_batch(f);
    if (ctx) ctx->features = std::move(f);
    return y;
  }
  return net_->forward_batch(x, ctx ? &ctx->tape : nullptr);
}

Eigen::MatrixXd Approximator::forward_from_features(const Eigen::MatrixXd& features) const {
  if (kind_ != ReprKind::kRandomized) {
    throw std::logic_error("Approximator::forward_from_features: dense variant has no basis");
  }
  return readout_->apply_batch(features);
}

Eigen::MatrixXd Approximator::compute_features(const Eigen::MatrixXd& x) const {
  if (kind_ != ReprKind::kRandomized) {
    throw std::logic_error("Approximator::compute_features: dense variant has no basis");
  }
  return basis_->features_batch(x);
}

Eigen::VectorXd Approximator::backprop_flat(const Ctx& ctx,
                                            const Eigen::MatrixXd& output_grad) const {
  if (output_grad.cols() != output_dim_) {
    throw std::invalid_argument("Approximator::backprop_flat: output grad shape mismatch");
  }
  if (kind_ == ReprKind::kRandomized) {
    if (ctx.features.rows() != output_grad.rows()) {
      throw std::invalid_argument("Approximator::backprop_flat: context/grad row mismatch");
    }
    // dW = dY^T F, db = column sums of dY
    Eigen::MatrixXd dw = output_grad.transpose() * ctx.features;
    Eigen::VectorXd db = output_grad.colwise().sum().transpose();
    Eigen::VectorXd flat(trainable_count());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < dw.rows(); ++r) {
      for (Eigen::Index c = 0; c < dw.cols(); ++c) flat(k++) = dw(r, c);
    }
    for (Eigen::Index r = 0; r < db.size(); ++r) flat(k++) = db(r);
    return flat;
  }
  DenseGrads grads = net_->backward(ctx.tape, output_grad);
  return DenseNet::flatten_grads(grads);
}

std::int64_t Approximator::trainable_count() const {
  return kind_ == ReprKind::kRandomized ? readout_->param_count() : net_->param_count();
}

std::int64_t Approximator::total_count() const {
  return trainable_count() + (kind_ == ReprKind::kRandomized ? basis_->param_count() : 0);
}

Eigen::VectorXd Approximator::flat_params() const {
  if (kind_ == ReprKind::kDense) return net_->flat_params();
  Eigen::VectorXd flat(trainable_count());
  Eigen::Index k = 0;
  const Eigen::MatrixXd& w = readout_->weight;
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) flat(k++) = w(r, c);
  }
  for (Eigen::Index r = 0; r < readout_->bias.size(); ++r) flat(k++) = readout_->bias(r);
  return flat;
}

void Approximator::set_flat_params(const Eigen::VectorXd& flat) {
  if (flat.size() != trainable_count()) {
    throw std::invalid_argument("Approximator::set_flat_params: size mismatch");
  }
  if (kind_ == ReprKind::kDense) {
    net_->set_flat_params(flat);
    return;
  }
  Eigen::Index k = 0;
  Eigen::MatrixXd& w = readout_->weight;
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat(k++);
  }
  for (Eigen::Index r = 0; r < readout_->bias.size(); ++r) readout_->bias(r) = flat(k++);
}

std::uint64_t Approximator::frozen_checksum() const {
  return kind_ == ReprKind::kRandomized ? basis_->checksum() : 0;
}

const LinearReadout& Approximator::readout() const {
  if (!readout_) throw std::logic_error("Approximator: no readout on dense variant");
  return *readout_;
}

LinearReadout& Approximator::readout() {
  if (!readout_) throw std::logic_error("Approximator: no readout on dense variant");
  return *readout_;
}

const DenseNet& Approximator::net() const {
  if (!net_) throw std::logic_error("Approximator: no dense net on randomized variant");
  return *net_;
}

DenseNet& Approximator::net() {
  if (!net_) throw std::logic_error("Approximator: no dense net on randomized variant");
  return *net_;
}

}  // namespace randpol
