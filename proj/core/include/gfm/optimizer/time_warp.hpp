#pragma once

#include <cmath>
#include <stdexcept>

namespace gfm::optimizer {

/// Diffeomorphism from positive durations to unconstrained reals; removes
/// the t > 0 constraint from the time variables.
inline double time_forward(double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("time_forward requires t > 0");
  }
  return t > 1.0 ? std::sqrt(2.0 * t - 1.0) - 1.0
                 : 1.0 - std::sqrt(2.0 / t - 1.0);
}

/// Inverse of time_forward.
inline double time_backward(double tau) {
  if (tau > 0.0) {
    return 0.5 * ((tau + 1.0) * (tau + 1.0) + 1.0);
  }
  const double w = 1.0 - tau;
  return 2.0 / (w * w + 1.0);
}

/// dt/dtau of time_backward, continuous across tau = 0.
inline double time_backward_derivative(double tau) {
  if (tau > 0.0) {
    return tau + 1.0;
  }
  const double w = 1.0 - tau;
  const double q = w * w + 1.0;
  return 4.0 * w / (q * q);
}

}  // namespace gfm::optimizer
