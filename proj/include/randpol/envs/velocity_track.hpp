#ifndef RANDPOL_ENVS_VELOCITY_TRACK_HPP_
#define RANDPOL_ENVS_VELOCITY_TRACK_HPP_

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "randpol/envs/curriculum.hpp"
#include "randpol/envs/env.hpp"

namespace randpol {

// Planar body-velocity tracking task. A first-order body with randomized
// gain/damping tracks commanded forward speed and yaw rate; commands are
// resampled mid-episode and drawn from the (shared) curriculum ranges.
// Episodes end by time limit only.
struct VelocityTrackParams {
  double dt = 0.05;          // 20 Hz-equivalent control step, seconds
  int episode_len = 400;     // 20 s episodes
  int resample_period = 200; // new command every 10 s

  // nominal first-order dynamics; per-episode randomization scales both
  double k_v_nominal = 2.0;
  double d_v_nominal = 1.0;
  double k_w_nominal = 2.0;
  double d_w_nominal = 1.0;
  double randomize_lo = 0.8;
  double randomize_hi = 1.2;

  // random pushes: per-step probability of a velocity impulse, impulse
  // magnitude bound in m/s (rad/s for yaw)
  double push_prob = 0.005;
  double push_magnitude = 0.3;

  double v_max_phys = 3.0;
  double w_max_phys = 3.0;
  double reset_speed_range = 0.05;  // |v|, |w| at reset

  // reward weights and kernel widths
  double w_lin = 1.0;
  double w_yaw = 0.5;
  double sigma_v = 0.25;
  double sigma_w = 0.25;
  double w_act = 0.01;
  double w_rate = 0.01;
};

struct VelocityRewardComponents {
  double lin_tracking = 0.0;   // w_lin * exp(-(v-v_cmd)^2/sigma_v^2)
  double yaw_tracking = 0.0;   // w_yaw * exp(-(w-w_cmd)^2/sigma_w^2)
  double action_penalty = 0.0; // w_act * |a|^2
  double rate_penalty = 0.0;   // w_rate * |a - a_prev|^2
  double total() const { return lin_tracking + yaw_tracking - action_penalty - rate_penalty; }
};

VelocityRewardComponents velocity_reward(double v, double w, double v_cmd, double w_cmd,
                                         const Eigen::Vector2d& action,
                                         const Eigen::Vector2d& prev_action,
                                         const VelocityTrackParams& p);

class VelocityTrackEnv final : public Env {
 public:
  static constexpr int kActorObsDim = 8;
  static constexpr int kPrivObsDim = 12;
  static constexpr int kActionDim = 2;

  VelocityTrackEnv(VelocityTrackParams params, std::shared_ptr<const CurriculumState> curriculum);

  int actor_obs_dim() const override { return kActorObsDim; }
  int priv_obs_dim() const override { return kPrivObsDim; }
  int action_dim() const override { return kActionDim; }

  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action, Rng& rng) override;
  std::optional<EpisodeRecord> take_episode_record() override;

  // current physical state, exposed for tests
  double v() const { return v_; }
  double w() const { return w_; }
  double heading() const { return heading_; }
  double v_cmd() const { return v_cmd_; }
  double w_cmd() const { return w_cmd_; }
  double k_v() const { return k_v_; }
  double d_v() const { return d_v_; }
  const VelocityTrackParams& params() const { return params_; }

 private:
  Eigen::VectorXd observation() const;
  void sample_command(Rng& rng);

  VelocityTrackParams params_;
  std::shared_ptr<const CurriculumState> curriculum_;

  double v_ = 0.0, w_ = 0.0, heading_ = 0.0;
  double v_cmd_ = 0.0, w_cmd_ = 0.0;
  double k_v_ = 0.0, d_v_ = 0.0, k_w_ = 0.0, d_w_ = 0.0;
  Eigen::Vector2d prev_action_ = Eigen::Vector2d::Zero();
  int step_count_ = 0;

  // episode accumulators
  double ep_reward_ = 0.0, ep_lin_ = 0.0, ep_yaw_ = 0.0;
  double ep_fwd_err_ = 0.0, ep_yaw_err_ = 0.0, ep_kernel_ = 0.0;
  std::optional<EpisodeRecord> pending_record_;
};

}  // namespace randpol

#endif  // RANDPOL_ENVS_VELOCITY_TRACK_HPP_
