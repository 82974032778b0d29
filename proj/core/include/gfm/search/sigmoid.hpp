#pragma once

#include <cmath>

namespace gfm::search {

/// Parameters of the sigmoid that squashes metric values into step costs.
/// epsilon = 0 collapses the sigmoid to the constant 1/2, which turns the
/// perception-aware search into a plain shortest-path search (the ablation
/// arm); the standard configuration requires epsilon > 0.
struct SigmoidParams {
  double epsilon = 1.0;
  int L = 64;
};

/// sigma_eps(m) = 1 / (1 + exp((eps*L - 2*eps*m) / L)), strictly increasing
/// in m for eps > 0, mapping [0, L] into (0, 1).
inline double sigmoid(double m, const SigmoidParams& p) {
  return 1.0 / (1.0 + std::exp((p.epsilon * p.L - 2.0 * p.epsilon * m) / p.L));
}

/// Closed-form derivative of sigmoid() with respect to m.
inline double sigmoid_derivative(double m, const SigmoidParams& p) {
  const double u = 2.0 * p.epsilon * m / p.L - p.epsilon;
  return (2.0 * p.epsilon / p.L) / (2.0 + std::exp(u) + std::exp(-u));
}

}  // namespace gfm::search
