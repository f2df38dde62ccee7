#pragma once

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "error.hpp"

namespace homolevel {

/// Regularised lower incomplete gamma P(a, y) = gamma(a, y) / Gamma(a).
inline double incomplete_gamma_p(double a, double y) {
  if (!(a > 0.0)) throw InputError("incomplete gamma needs a > 0");
  if (y <= 0.0) return 0.0;
  return boost::math::gamma_p(a, y);
}

/// Integral over [0, y] of exp(z) z^{a-1}, via the series
/// sum_k y^{k+a} / (k! (k+a)).
inline double exp_power_integral(double a, double y) {
  if (!(a > 0.0)) throw InputError("exp_power_integral needs a > 0");
  if (y <= 0.0) return 0.0;
  double term = std::pow(y, a); // y^{k+a} / k!
  double sum = term / a;
  for (int k = 1; k < 2000; ++k) {
    term *= y / k;
    const double add = term / (k + a);
    sum += add;
    if (add < 1e-17 * sum && k > y) break;
  }
  return sum;
}

} // namespace homolevel
