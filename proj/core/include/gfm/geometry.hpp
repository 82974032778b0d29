#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace gfm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle into (-pi, pi]. Idempotent.
inline double normalize_angle(double theta) {
  double a = std::remainder(theta, kTwoPi);
  if (a <= -kPi) {
    a += kTwoPi;
  }
  return a;
}

/// Shift `theta` by multiples of 2*pi so it lies within pi of `reference`.
inline double unwrap_near(double theta, double reference) {
  return reference + std::remainder(theta - reference, kTwoPi);
}

/// Planar robot pose [x, y, theta], theta stored normalized to (-pi, pi].
struct PoseSE2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  PoseSE2() = default;
  PoseSE2(double px, double py, double ptheta)
      : x(px), y(py), theta(normalize_angle(ptheta)) {}

  Eigen::Vector2d position() const { return {x, y}; }
  Eigen::Vector3d vec() const { return {x, y, theta}; }

  static PoseSE2 from_vec(const Eigen::Vector3d& v) {
    return PoseSE2(v.x(), v.y(), v.z());
  }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  /// d/dtheta of the rotation matrix.
  Eigen::Matrix2d rotation_derivative() const {
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2d r;
    r << -s, -c, c, -s;
    return r;
  }
};

}  // namespace gfm
