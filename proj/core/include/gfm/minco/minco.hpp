#pragma once

#include <Eigen/Core>

#include <vector>

namespace gfm::minco {

/// Banded linear system with equal lower/upper bandwidth, LU-factorized in
/// place without pivoting (the trajectory systems are well conditioned for
/// positive segment times). Factor once, then solve against A or A^T.
class BandedLU {
 public:
  BandedLU() = default;
  BandedLU(int n, int bandwidth);

  double& at(int i, int j) { return data_[(i - j + bw_) * n_ + j]; }
  double at(int i, int j) const { return data_[(i - j + bw_) * n_ + j]; }

  void factorize();
  void solve(Eigen::Ref<Eigen::MatrixX3d> b) const;          // A x = b
  void solve_transpose(Eigen::Ref<Eigen::MatrixX3d> b) const;  // A^T x = b

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

 private:
  int n_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

/// Piecewise polynomial trajectory in (x, y, yaw) that minimizes the s-th
/// derivative subject to boundary states, interior waypoints, and
/// C^{2s-2} continuity. Each of the K segments is a degree-(2s-1)
/// polynomial over the natural basis [1, t, ..., t^{2s-1}]. The coefficient
/// map from (waypoints, times) is the banded solve, so construction is
/// linear in K and cost gradients propagate exactly through it.
/// Immutable after construction.
class MincoTrajectory {
 public:
  /// Empty trajectory (segment_count() == 0); construct() makes real ones.
  MincoTrajectory() = default;

  /// waypoints: 3 x (K-1) interior waypoints (may be empty for K = 1);
  /// times: K positive segment durations;
  /// start_state / end_state: 3 x s blocks, columns = position, velocity,
  /// ..., (s-1)-th derivative. Throws std::domain_error on t <= 0.
  static MincoTrajectory construct(const Eigen::Matrix3Xd& waypoints,
                                   const Eigen::VectorXd& times,
                                   const Eigen::Matrix3Xd& start_state,
                                   const Eigen::Matrix3Xd& end_state,
                                   int s = 3);

  int segment_count() const { return static_cast<int>(times_.size()); }
  int order() const { return s_; }
  double total_time() const { return cumulative_.back(); }
  const Eigen::VectorXd& times() const { return times_; }
  const Eigen::MatrixX3d& coefficients() const { return coeffs_; }
  const Eigen::Matrix3Xd& waypoints() const { return waypoints_; }
  const Eigen::Matrix3Xd& start_state() const { return start_state_; }
  const Eigen::Matrix3Xd& end_state() const { return end_state_; }

  /// Derivative of given order at absolute time t. Times outside
  /// [0, total_time()] are clamped; `clamped` reports that when non-null.
  Eigen::Vector3d evaluate(double t, int order = 0,
                           bool* clamped = nullptr) const;

  /// Derivative of given order on segment `i` at local time tau.
  Eigen::Vector3d evaluate_local(int i, double tau, int order) const;

  /// Exact gradients of any cost J through the coefficient map: given
  /// dJ/dC (2sK x 3) and the direct dJ/dt (K), returns dJ/dQ (3 x (K-1))
  /// and the total dJ/dt including the coefficient dependence on times.
  void propagate_gradient(const Eigen::MatrixX3d& grad_coeffs,
                          const Eigen::VectorXd& grad_times_direct,
                          Eigen::Matrix3Xd& grad_waypoints,
                          Eigen::VectorXd& grad_times_total) const;

  /// Integral of the squared s-th derivative over the whole trajectory.
  double control_energy() const;
  /// Partial gradients of control_energy() w.r.t. coefficients and times
  /// (holding the other fixed; feed through propagate_gradient).
  void control_energy_gradient(Eigen::MatrixX3d& grad_coeffs,
                               Eigen::VectorXd& grad_times) const;

  /// Natural-basis row [t^0, ..., t^{2s-1}] differentiated `order` times.
  static Eigen::VectorXd basis(double t, int order, int s);

 private:
  int s_ = 3;
  Eigen::VectorXd times_;
  std::vector<double> cumulative_ = {0.0};  // size K+1
  Eigen::Matrix3Xd waypoints_;
  Eigen::Matrix3Xd start_state_;
  Eigen::Matrix3Xd end_state_;
  Eigen::MatrixX3d coeffs_;  // 2sK x 3
  BandedLU lu_;              // factored system, kept for gradient propagation
};

}  // namespace gfm::minco
