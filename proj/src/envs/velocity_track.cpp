#include "randpol/envs/velocity_track.hpp"

#include <cmath>
#include <stdexcept>

namespace randpol {

namespace {
double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}
}  // namespace

VelocityRewardComponents velocity_reward(double v, double w, double v_cmd, double w_cmd,
                                         const Eigen::Vector2d& action,
                                         const Eigen::Vector2d& prev_action,
                                         const VelocityTrackParams& p) {
  VelocityRewardComponents c;
  const double ev = (v - v_cmd) / p.sigma_v;
  const double ew = (w - w_cmd) / p.sigma_w;
  c.lin_tracking = p.w_lin * std::exp(-ev * ev);
  c.yaw_tracking = p.w_yaw * std::exp(-ew * ew);
  c.action_penalty = p.w_act * action.squaredNorm();
  c.rate_penalty = p.w_rate * (action - prev_action).squaredNorm();
  return c;
}

VelocityTrackEnv::VelocityTrackEnv(VelocityTrackParams params,
                                   std::shared_ptr<const CurriculumState> curriculum)
    : params_(params), curriculum_(std::move(curriculum)) {
  if (!curriculum_) throw std::invalid_argument("VelocityTrackEnv: null curriculum");
  if (params_.episode_len < 1 || params_.resample_period < 1) {
    throw std::invalid_argument("VelocityTrackEnv: bad episode/resample length");
  }
}

void VelocityTrackEnv::sample_command(Rng& rng) {
  v_cmd_ = rng.uniform(curriculum_->v_lo, curriculum_->v_hi);
  w_cmd_ = rng.uniform(curriculum_->w_lo, curriculum_->w_hi);
}

Eigen::VectorXd VelocityTrackEnv::reset(Rng& rng) {
  v_ = rng.uniform(-params_.reset_speed_range, params_.reset_speed_range);
  w_ = rng.uniform(-params_.reset_speed_range, params_.reset_speed_range);
  heading_ = rng.uniform(-M_PI, M_PI);
  k_v_ = params_.k_v_nominal * rng.uniform(params_.randomize_lo, params_.randomize_hi);
  d_v_ = params_.d_v_nominal * rng.uniform(params_.randomize_lo, params_.randomize_hi);
  k_w_ = params_.k_w_nominal * rng.uniform(params_.randomize_lo, params_.randomize_hi);
  d_w_ = params_.d_w_nominal * rng.uniform(params_.randomize_lo, params_.randomize_hi);
  sample_command(rng);
  prev_action_.setZero();
  step_count_ = 0;
  ep_reward_ = ep_lin_ = ep_yaw_ = ep_fwd_err_ = ep_yaw_err_ = ep_kernel_ = 0.0;
  return observation();
}

Eigen::VectorXd VelocityTrackEnv::observation() const {
  Eigen::VectorXd o(kPrivObsDim);
  o << v_, w_, std::sin(heading_), std::cos(heading_), v_cmd_, w_cmd_, prev_action_(0),
      prev_action_(1), k_v_, d_v_, k_w_, d_w_;
  return o;
}

StepResult VelocityTrackEnv::step(const Eigen::VectorXd& action, Rng& rng) {
  if (action.size() != kActionDim) {
    throw std::invalid_argument("VelocityTrackEnv::step: action dimension mismatch");
  }
  if (!action.allFinite()) {
    throw std::invalid_argument("VelocityTrackEnv::step: non-finite action");
  }
  Eigen::Vector2d a = action.head<2>().cwiseMax(-1.0).cwiseMin(1.0);

  // occasional impulses; drawn as a velocity change, applied through dt
  double push_v = 0.0, push_w = 0.0;
  if (params_.push_prob > 0.0 && rng.bernoulli(params_.push_prob)) {
    push_v = rng.uniform(-params_.push_magnitude, params_.push_magnitude) / params_.dt;
  }
  if (params_.push_prob > 0.0 && rng.bernoulli(params_.push_prob)) {
    push_w = rng.uniform(-params_.push_magnitude, params_.push_magnitude) / params_.dt;
  }

  v_ = v_ + params_.dt * (k_v_ * a(0) - d_v_ * v_ + push_v);
  w_ = w_ + params_.dt * (k_w_ * a(1) - d_w_ * w_ + push_w);
  v_ = std::clamp(v_, -params_.v_max_phys, params_.v_max_phys);
  w_ = std::clamp(w_, -params_.w_max_phys, params_.w_max_phys);
  heading_ = wrap_angle(heading_ + params_.dt * w_);
  step_count_ += 1;

  VelocityRewardComponents rc = velocity_reward(v_, w_, v_cmd_, w_cmd_, a, prev_action_, params_);
  const double reward = rc.total();
  prev_action_ = a;

  ep_reward_ += reward;
  ep_lin_ += rc.lin_tracking;
  ep_yaw_ += rc.yaw_tracking;
  ep_fwd_err_ += std::abs(v_ - v_cmd_);
  ep_yaw_err_ += std::abs(w_ - w_cmd_);
  ep_kernel_ += params_.w_lin > 0.0 ? rc.lin_tracking / params_.w_lin : 0.0;

  StepResult out;
  out.reward = reward;

  const bool time_up = step_count_ >= params_.episode_len;
  if (time_up) {
    out.done = true;
    out.truncated = true;  // this task has no failure terminations
    out.final_obs = observation();

    EpisodeRecord rec;
    rec.total_reward = ep_reward_;
    rec.length = step_count_;
    rec.mean_lin_reward = ep_lin_ / step_count_;
    rec.mean_yaw_reward = ep_yaw_ / step_count_;
    rec.mean_fwd_err = ep_fwd_err_ / step_count_;
    rec.mean_yaw_err = ep_yaw_err_ / step_count_;
    rec.tracking_score = ep_kernel_ / step_count_;
    pending_record_ = rec;

    out.obs = reset(rng);
  } else {
    if (step_count_ % params_.resample_period == 0) sample_command(rng);
    out.obs = observation();
  }
  return out;
}

std::optional<EpisodeRecord> VelocityTrackEnv::take_episode_record() {
  auto rec = pending_record_;
  pending_record_.reset();
  return rec;
}

}  // namespace randpol
