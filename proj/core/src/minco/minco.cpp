#include "gfm/minco/minco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfm::minco {

BandedLU::BandedLU(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * (2 * bandwidth + 1), 0.0) {}

void BandedLU::factorize() {
  for (int k = 0; k <= n_ - 2; ++k) {
    const int im = std::min(k + bw_, n_ - 1);
    const double pivot = at(k, k);
    for (int i = k + 1; i <= im; ++i) {
      if (at(i, k) != 0.0) {
        at(i, k) /= pivot;
      }
    }
    const int jm = std::min(k + bw_, n_ - 1);
    for (int j = k + 1; j <= jm; ++j) {
      const double c = at(k, j);
      if (c != 0.0) {
        for (int i = k + 1; i <= im; ++i) {
          if (at(i, k) != 0.0) {
            at(i, j) -= at(i, k) * c;
          }
        }
      }
    }
  }
}

void BandedLU::solve(Eigen::Ref<Eigen::MatrixX3d> b) const {
  for (int j = 0; j <= n_ - 1; ++j) {
    const int im = std::min(j + bw_, n_ - 1);
    for (int i = j + 1; i <= im; ++i) {
      if (at(i, j) != 0.0) {
        b.row(i) -= at(i, j) * b.row(j);
      }
    }
  }
  for (int j = n_ - 1; j >= 0; --j) {
    b.row(j) /= at(j, j);
    const int im = std::max(0, j - bw_);
    for (int i = im; i <= j - 1; ++i) {
      if (at(i, j) != 0.0) {
        b.row(i) -= at(i, j) * b.row(j);
      }
    }
  }
}

void BandedLU::solve_transpose(Eigen::Ref<Eigen::MatrixX3d> b) const {
  for (int j = 0; j <= n_ - 1; ++j) {
    b.row(j) /= at(j, j);
    const int im = std::min(j + bw_, n_ - 1);
    for (int i = j + 1; i <= im; ++i) {
      if (at(j, i) != 0.0) {
        b.row(i) -= at(j, i) * b.row(j);
      }
    }
  }
  for (int j = n_ - 1; j >= 0; --j) {
    const int im = std::max(0, j - bw_);
    for (int i = im; i <= j - 1; ++i) {
      if (at(j, i) != 0.0) {
        b.row(i) -= at(j, i) * b.row(j);
      }
    }
  }
}

Eigen::VectorXd MincoTrajectory::basis(double t, int order, int s) {
  const int n = 2 * s;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  double tn = 1.0;
  for (int m = order; m < n; ++m) {
    double coeff = 1.0;
    for (int r = 0; r < order; ++r) {
      coeff *= m - r;
    }
    beta(m) = coeff * tn;
    tn *= t;
  }
  return beta;
}

MincoTrajectory MincoTrajectory::construct(const Eigen::Matrix3Xd& waypoints,
                                           const Eigen::VectorXd& times,
                                           const Eigen::Matrix3Xd& start_state,
                                           const Eigen::Matrix3Xd& end_state,
                                           int s) {
  const int k = static_cast<int>(times.size());
  if (k < 1) {
    throw std::domain_error("MINCO needs at least one segment");
  }
  if (s < 2 || s > 5) {
    throw std::domain_error("MINCO derivative order must lie in [2, 5]");
  }
  if ((times.array() <= 0.0).any()) {
    throw std::domain_error("MINCO segment durations must be positive");
  }
  if (waypoints.cols() != k - 1) {
    throw std::domain_error("MINCO waypoint count must equal K - 1");
  }
  if (start_state.cols() != s || end_state.cols() != s) {
    throw std::domain_error("MINCO boundary states must have s columns");
  }

  const int n = 2 * s * k;
  MincoTrajectory traj;
  traj.s_ = s;
  traj.times_ = times;
  traj.waypoints_ = waypoints;
  traj.start_state_ = start_state;
  traj.end_state_ = end_state;
  traj.cumulative_.resize(k + 1);
  traj.cumulative_[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    traj.cumulative_[i + 1] = traj.cumulative_[i] + times(i);
  }

  BandedLU lu(n, 2 * s);
  Eigen::MatrixX3d b = Eigen::MatrixX3d::Zero(n, 3);

  // Start boundary: derivative r of segment 0 at t = 0.
  double factorial = 1.0;
  for (int r = 0; r < s; ++r) {
    if (r > 0) factorial *= r;
    lu.at(r, r) = factorial;
    b.row(r) = start_state.col(r).transpose();
  }

  // Interior joints: high-order continuity, waypoint, low-order continuity.
  for (int i = 0; i < k - 1; ++i) {
    const int base = 2 * s * i + s;
    const int ci = 2 * s * i;
    const double ti = times(i);
    for (int d = 0; d <= s - 2; ++d) {
      const int order = s + d;
      const Eigen::VectorXd beta = basis(ti, order, s);
      for (int m = 0; m < 2 * s; ++m) {
        if (beta(m) != 0.0) lu.at(base + d, ci + m) = beta(m);
      }
      double fac = 1.0;
      for (int r = 2; r <= order; ++r) fac *= r;
      lu.at(base + d, ci + 2 * s + order) = -fac;
    }
    {
      const Eigen::VectorXd beta = basis(ti, 0, s);
      for (int m = 0; m < 2 * s; ++m) {
        lu.at(base + s - 1, ci + m) = beta(m);
      }
      b.row(base + s - 1) = waypoints.col(i).transpose();
    }
    for (int d = 0; d <= s - 1; ++d) {
      const Eigen::VectorXd beta = basis(ti, d, s);
      for (int m = 0; m < 2 * s; ++m) {
        if (beta(m) != 0.0) lu.at(base + s + d, ci + m) = beta(m);
      }
      double fac = 1.0;
      for (int r = 2; r <= d; ++r) fac *= r;
      lu.at(base + s + d, ci + 2 * s + d) = -fac;
    }
  }

  // End boundary: derivative r of the last segment at t = T_{K-1}.
  const int tail = n - s;
  const int ck = 2 * s * (k - 1);
  for (int r = 0; r < s; ++r) {
    const Eigen::VectorXd beta = basis(times(k - 1), r, s);
    for (int m = 0; m < 2 * s; ++m) {
      if (beta(m) != 0.0) lu.at(tail + r, ck + m) = beta(m);
    }
    b.row(tail + r) = end_state.col(r).transpose();
  }

  lu.factorize();
  lu.solve(b);

  traj.coeffs_ = std::move(b);
  traj.lu_ = std::move(lu);
  return traj;
}

Eigen::Vector3d MincoTrajectory::evaluate_local(int i, double tau,
                                                int order) const {
  if (order >= 2 * s_) {
    return Eigen::Vector3d::Zero();
  }
  const Eigen::VectorXd beta = basis(tau, order, s_);
  return coeffs_.middleRows(2 * s_ * i, 2 * s_).transpose() * beta;
}

Eigen::Vector3d MincoTrajectory::evaluate(double t, int order,
                                          bool* clamped) const {
  const double total = total_time();
  bool was_clamped = false;
  if (t < 0.0) {
    t = 0.0;
    was_clamped = true;
  } else if (t > total) {
    t = total;
    was_clamped = true;
  }
  if (clamped) *clamped = was_clamped;

  const int k = segment_count();
  int i = static_cast<int>(std::upper_bound(cumulative_.begin() + 1,
                                            cumulative_.end(), t) -
                           (cumulative_.begin() + 1));
  i = std::clamp(i, 0, k - 1);
  return evaluate_local(i, t - cumulative_[i], order);
}

void MincoTrajectory::propagate_gradient(const Eigen::MatrixX3d& grad_coeffs,
                                         const Eigen::VectorXd& grad_times_direct,
                                         Eigen::Matrix3Xd& grad_waypoints,
                                         Eigen::VectorXd& grad_times_total) const {
  const int k = segment_count();
  const int s = s_;

  Eigen::MatrixX3d adj = grad_coeffs;
  lu_.solve_transpose(adj);

  grad_waypoints.resize(3, k - 1);
  for (int i = 0; i < k - 1; ++i) {
    grad_waypoints.col(i) = adj.row(2 * s * i + 2 * s - 1).transpose();
  }

  // dJ/dT_i = -adj^T (dA/dT_i) c: each joint row of constraint order r
  // contributes the (r+1)-th trajectory derivative at the segment end.
  grad_times_total = grad_times_direct;
  for (int i = 0; i < k - 1; ++i) {
    const int base = 2 * s * i + s;
    const double ti = times_(i);
    double acc = 0.0;
    for (int d = 0; d <= s - 2; ++d) {
      acc += adj.row(base + d).dot(evaluate_local(i, ti, s + d + 1));
    }
    acc += adj.row(base + s - 1).dot(evaluate_local(i, ti, 1));
    for (int d = 0; d <= s - 1; ++d) {
      acc += adj.row(base + s + d).dot(evaluate_local(i, ti, d + 1));
    }
    grad_times_total(i) -= acc;
  }
  {
    const int tail = 2 * s * k - s;
    const double tk = times_(k - 1);
    double acc = 0.0;
    for (int r = 0; r < s; ++r) {
      acc += adj.row(tail + r).dot(evaluate_local(k - 1, tk, r + 1));
    }
    grad_times_total(k - 1) -= acc;
  }
}

double MincoTrajectory::control_energy() const {
  const int k = segment_count();
  const int s = s_;
  double energy = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto block = coeffs_.middleRows(2 * s * i, 2 * s);
    const double ti = times_(i);
    for (int m = s; m < 2 * s; ++m) {
      double fm = 1.0;
      for (int r = 0; r < s; ++r) fm *= m - r;
      for (int nn = s; nn < 2 * s; ++nn) {
        double fn = 1.0;
        for (int r = 0; r < s; ++r) fn *= nn - r;
        const int pw = m + nn - 2 * s + 1;
        energy += fm * fn * block.row(m).dot(block.row(nn)) *
                  std::pow(ti, pw) / pw;
      }
    }
  }
  return energy;
}

void MincoTrajectory::control_energy_gradient(Eigen::MatrixX3d& grad_coeffs,
                                              Eigen::VectorXd& grad_times) const {
  const int k = segment_count();
  const int s = s_;
  grad_coeffs = Eigen::MatrixX3d::Zero(2 * s * k, 3);
  grad_times = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < k; ++i) {
    const auto block = coeffs_.middleRows(2 * s * i, 2 * s);
    const double ti = times_(i);
    for (int m = s; m < 2 * s; ++m) {
      double fm = 1.0;
      for (int r = 0; r < s; ++r) fm *= m - r;
      for (int nn = s; nn < 2 * s; ++nn) {
        double fn = 1.0;
        for (int r = 0; r < s; ++r) fn *= nn - r;
        const int pw = m + nn - 2 * s + 1;
        const double tp = std::pow(ti, pw);
        grad_coeffs.row(2 * s * i + m) += fm * fn * block.row(nn) * tp / pw;
        grad_coeffs.row(2 * s * i + nn) += fm * fn * block.row(m) * tp / pw;
        grad_times(i) +=
            fm * fn * block.row(m).dot(block.row(nn)) * std::pow(ti, pw - 1);
      }
    }
  }
}

}  // namespace gfm::minco
