#ifndef RANDPOL_ENVS_PENDULUM_HPP_
#define RANDPOL_ENVS_PENDULUM_HPP_

#include <Eigen/Dense>
#include <optional>

#include "randpol/envs/env.hpp"

namespace randpol {

// Classic pendulum swing-up sanity task. Angle is measured from upright;
// reward is -(angle^2 + 0.1 w^2 + 0.001 torque^2), maximal (0) at upright
// rest with zero torque. Episodes end by time limit only. Resets span the
// full angle range and a wide speed range, so rollouts regularly pass
// through the upright region.
struct PendulumParams {
  double dt = 0.05;
  int episode_len = 200;
  double mass = 1.0;
  double length = 1.0;
  double gravity = 10.0;
  double max_speed = 8.0;
  double max_torque = 2.0;
  double reset_angle_range = M_PI;  // theta ~ U[-range, range]
  double reset_speed_range = 6.0;   // omega ~ U[-range, range]
};

// total mechanical energy of the unactuated rod pendulum (I = m l^2 / 3,
// potential measured at the center of mass, zero at horizontal)
double pendulum_energy(double theta, double omega, const PendulumParams& p);

class PendulumEnv final : public Env {
 public:
  static constexpr int kObsDim = 3;  // [cos theta, sin theta, omega]
  static constexpr int kActionDim = 1;

  explicit PendulumEnv(PendulumParams params) : params_(params) {}

  int actor_obs_dim() const override { return kObsDim; }
  int priv_obs_dim() const override { return kObsDim; }
  int action_dim() const override { return kActionDim; }

  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action, Rng& rng) override;
  std::optional<EpisodeRecord> take_episode_record() override;

  double theta() const { return theta_; }
  double omega() const { return omega_; }
  const PendulumParams& params() const { return params_; }

  // places the pendulum in a specific state (tests)
  void set_state(double theta, double omega);

 private:
  Eigen::VectorXd observation() const;

  PendulumParams params_;
  double theta_ = 0.0, omega_ = 0.0;
  int step_count_ = 0;
  double ep_reward_ = 0.0;
  std::optional<EpisodeRecord> pending_record_;
};

}  // namespace randpol

#endif  // RANDPOL_ENVS_PENDULUM_HPP_
