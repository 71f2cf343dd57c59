#include "randpol/envs/pendulum.hpp"

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

double pendulum_energy(double theta, double omega, const PendulumParams& p) {
  const double inertia = p.mass * p.length * p.length / 3.0;
  return 0.5 * inertia * omega * omega +
         p.mass * p.gravity * (p.length / 2.0) * std::cos(theta);
}

Eigen::VectorXd PendulumEnv::reset(Rng& rng) {
  theta_ = rng.uniform(-params_.reset_angle_range, params_.reset_angle_range);
  omega_ = rng.uniform(-params_.reset_speed_range, params_.reset_speed_range);
  step_count_ = 0;
  ep_reward_ = 0.0;
  return observation();
}

Eigen::VectorXd PendulumEnv::observation() const {
  Eigen::VectorXd o(kObsDim);
  o << std::cos(theta_), std::sin(theta_), omega_;
  return o;
}

void PendulumEnv::set_state(double theta, double omega) {
  theta_ = theta;
  omega_ = omega;
}

StepResult PendulumEnv::step(const Eigen::VectorXd& action, Rng& rng) {
  if (action.size() != kActionDim) {
    throw std::invalid_argument("PendulumEnv::step: action dimension mismatch");
  }
  if (!action.allFinite()) {
    throw std::invalid_argument("PendulumEnv::step: non-finite action");
  }
  const double torque = params_.max_torque * std::clamp(action(0), -1.0, 1.0);

  // semi-implicit Euler on the rod pendulum, angle measured from upright
  const double g = params_.gravity, l = params_.length, m = params_.mass;
  omega_ += params_.dt * (1.5 * g / l * std::sin(theta_) + 3.0 / (m * l * l) * torque);
  omega_ = std::clamp(omega_, -params_.max_speed, params_.max_speed);
  theta_ = wrap_angle(theta_ + params_.dt * omega_);
  step_count_ += 1;

  const double reward =
      -(theta_ * theta_ + 0.1 * omega_ * omega_ + 0.001 * torque * torque);
  ep_reward_ += reward;

  StepResult out;
  out.reward = reward;
  if (step_count_ >= params_.episode_len) {
    out.done = true;
    out.truncated = true;
    out.final_obs = observation();

    EpisodeRecord rec;
    rec.total_reward = ep_reward_;
    rec.length = step_count_;
    pending_record_ = rec;

    out.obs = reset(rng);
  } else {
    out.obs = observation();
  }
  return out;
}

std::optional<EpisodeRecord> PendulumEnv::take_episode_record() {
  auto rec = pending_record_;
  pending_record_.reset();
  return rec;
}

}  // namespace randpol
