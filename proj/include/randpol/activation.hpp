#ifndef RANDPOL_ACTIVATION_HPP_
#define RANDPOL_ACTIVATION_HPP_

#include <cmath>

namespace randpol {

// exponential linear unit, alpha = 1
inline double elu(double z) { return z >= 0.0 ? z : std::expm1(z); }

// derivative of elu; equals 1 at z = 0 from both sides
inline double elu_grad(double z) { return z >= 0.0 ? 1.0 : std::exp(z); }

}  // namespace randpol

#endif  // RANDPOL_ACTIVATION_HPP_
