#ifndef RANDPOL_ENVS_CURRICULUM_HPP_
#define RANDPOL_ENVS_CURRICULUM_HPP_

#include <algorithm>
#include <cmath>

namespace randpol {

// Promotion-based command curriculum: command ranges start narrow and are
// expanded by expansion_step whenever the episode-averaged tracking score
// crosses promotion_threshold, up to the configured maxima. Ranges only
// ever grow.
struct CurriculumState {
  double v_lo = 0.0;
  double v_hi = 0.2;
  double w_lo = -0.2;
  double w_hi = 0.2;
  double v_hi_max = 1.0;
  double w_abs_max = 1.0;
  double promotion_threshold = 0.8;
  double expansion_step = 0.1;

  bool at_max() const { return v_hi >= v_hi_max && w_hi >= w_abs_max && w_lo <= -w_abs_max; }
};

inline CurriculumState curriculum_update(CurriculumState cs, double episode_tracking_score) {
  if (episode_tracking_score >= cs.promotion_threshold && !cs.at_max()) {
    // snap within rounding distance of the bound so ceil(range/step)
    // promotions reach the maxima exactly
    auto expand = [](double v, double step, double bound) {
      double next = std::min(v + step, bound);
      return bound - next < 1e-9 * std::max(1.0, std::abs(bound)) ? bound : next;
    };
    cs.v_hi = expand(cs.v_hi, cs.expansion_step, cs.v_hi_max);
    cs.w_hi = expand(cs.w_hi, cs.expansion_step, cs.w_abs_max);
    cs.w_lo = -expand(-cs.w_lo, cs.expansion_step, cs.w_abs_max);
  }
  return cs;
}

inline CurriculumState curriculum_at_max(CurriculumState cs) {
  cs.v_hi = cs.v_hi_max;
  cs.w_hi = cs.w_abs_max;
  cs.w_lo = -cs.w_abs_max;
  return cs;
}

}  // namespace randpol

#endif  // RANDPOL_ENVS_CURRICULUM_HPP_
