#ifndef RANDPOL_TESTS_TEST_HELPERS_HPP_
#define RANDPOL_TESTS_TEST_HELPERS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "randpol/rng.hpp"

namespace randpol::testing {

// central finite differences of a scalar function of a flat parameter vector
inline Eigen::VectorXd finite_difference_grad(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& at,
    double h = 1e-5) {
  Eigen::VectorXd g(at.size());
  Eigen::VectorXd p = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    const double orig = p(i);
    p(i) = orig + h;
    const double fp = f(p);
    p(i) = orig - h;
    const double fm = f(p);
    p(i) = orig;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

// max over components of |a-b| / max(|a|, |b|, floor)
inline double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a(i)), std::abs(b(i)), floor});
    worst = std::max(worst, std::abs(a(i) - b(i)) / denom);
  }
  return worst;
}

inline Eigen::VectorXd random_vector(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

}  // namespace randpol::testing

#endif  // RANDPOL_TESTS_TEST_HELPERS_HPP_
