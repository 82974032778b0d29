#include "gfm/minco/minco.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <random>

using namespace gfm;
using minco::MincoTrajectory;

namespace {

Eigen::Matrix3Xd state_cols(const Eigen::Vector3d& pos) {
  Eigen::Matrix3Xd st = Eigen::Matrix3Xd::Zero(3, 3);
  st.col(0) = pos;
  return st;
}

MincoTrajectory random_trajectory(std::mt19937_64& rng, int k,
                                  double t_lo = 0.1, double t_hi = 10.0) {
  std::uniform_real_distribution<double> up(-5.0, 5.0);
  std::uniform_real_distribution<double> ut(t_lo, t_hi);
  Eigen::Matrix3Xd waypoints(3, k - 1);
  for (int i = 0; i < k - 1; ++i) {
    waypoints.col(i) = Eigen::Vector3d(up(rng), up(rng), up(rng));
  }
  Eigen::VectorXd times(k);
  for (int i = 0; i < k; ++i) times(i) = ut(rng);
  Eigen::Matrix3Xd start = Eigen::Matrix3Xd::Zero(3, 3);
  Eigen::Matrix3Xd end = Eigen::Matrix3Xd::Zero(3, 3);
  for (int c = 0; c < 3; ++c) {
    start.col(c) = Eigen::Vector3d(up(rng), up(rng), up(rng)) * (c == 0 ? 1.0 : 0.3);
    end.col(c) = Eigen::Vector3d(up(rng), up(rng), up(rng)) * (c == 0 ? 1.0 : 0.3);
  }
  return MincoTrajectory::construct(waypoints, times, start, end, 3);
}

}  // namespace

TEST_SUITE_BEGIN("minco");

TEST_CASE("construct degenerate and canonical cases") {
  SUBCASE("K=1 with identical rest endpoints is constant") {
    const Eigen::Vector3d p(1.0, -2.0, 0.5);
    const auto traj =
        MincoTrajectory::construct(Eigen::Matrix3Xd(3, 0),
                                   Eigen::VectorXd::Constant(1, 2.0),
                                   state_cols(p), state_cols(p), 3);
    for (int m = 1; m < 6; ++m) {
      CHECK(traj.coefficients().row(m).norm() < 1e-10);
    }
    CHECK((traj.evaluate(1.3, 0) - p).norm() < 1e-10);
  }
  SUBCASE("K=1 unit rest-to-rest move is the minimum-jerk quintic") {
    const auto traj = MincoTrajectory::construct(
        Eigen::Matrix3Xd(3, 0), Eigen::VectorXd::Constant(1, 1.0),
        state_cols({0.0, 0.0, 0.0}), state_cols({1.0, 0.0, 0.0}), 3);
    // x(t) = 10 t^3 - 15 t^4 + 6 t^5.
    const Eigen::VectorXd expected =
        (Eigen::VectorXd(6) << 0.0, 0.0, 0.0, 10.0, -15.0, 6.0).finished();
    for (int m = 0; m < 6; ++m) {
      CHECK(traj.coefficients()(m, 0) ==
            doctest::Approx(expected(m)).epsilon(1e-9));
      CHECK(std::abs(traj.coefficients()(m, 1)) < 1e-10);
    }
  }
  SUBCASE("non-positive durations are rejected") {
    CHECK_THROWS_AS(
        MincoTrajectory::construct(Eigen::Matrix3Xd(3, 0),
                                   Eigen::VectorXd::Constant(1, 0.0),
                                   state_cols({0, 0, 0}), state_cols({1, 0, 0}),
                                   3),
        std::domain_error);
  }
}

TEST_CASE("structural invariants on random instances") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> uk(1, 16);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = uk(rng);
    const auto traj = random_trajectory(rng, k);

    // Boundary conditions.
    for (int d = 0; d < 3; ++d) {
      CHECK((traj.evaluate_local(0, 0.0, d) - traj.start_state().col(d)).norm() <
            1e-9);
      CHECK((traj.evaluate_local(k - 1, traj.times()(k - 1), d) -
             traj.end_state().col(d))
                .norm() < 1e-9);
    }
    // Waypoints and C^4 continuity at joints.
    for (int i = 0; i + 1 < k; ++i) {
      const double ti = traj.times()(i);
      CHECK((traj.evaluate_local(i, ti, 0) - traj.waypoints().col(i)).norm() <
            1e-9);
      for (int d = 0; d <= 4; ++d) {
        const Eigen::Vector3d left = traj.evaluate_local(i, ti, d);
        const Eigen::Vector3d right = traj.evaluate_local(i + 1, 0.0, d);
        CHECK((left - right).norm() <
              1e-9 * std::max(1.0, left.norm()));
      }
    }
  }
}

TEST_CASE("evaluate") {
  std::mt19937_64 rng(7);
  const auto traj = random_trajectory(rng, 5, 0.4, 2.0);

  SUBCASE("interior joins return the waypoints") {
    double t = 0.0;
    for (int i = 0; i + 1 < 5; ++i) {
      t += traj.times()(i);
      CHECK((traj.evaluate(t, 0) - traj.waypoints().col(i)).norm() < 1e-9);
    }
  }
  SUBCASE("top derivative is piecewise constant") {
    for (int i = 0; i < 5; ++i) {
      const Eigen::Vector3d a = traj.evaluate_local(i, 0.1 * traj.times()(i), 5);
      const Eigen::Vector3d b = traj.evaluate_local(i, 0.9 * traj.times()(i), 5);
      CHECK((a - b).norm() < 1e-9 * std::max(1.0, a.norm()));
    }
  }
  SUBCASE("finite differences of position match velocity") {
    const double h = 1e-6;
    for (double t = 0.05; t < traj.total_time(); t += 0.37) {
      const Eigen::Vector3d fd =
          (traj.evaluate(t + h, 0) - traj.evaluate(t - h, 0)) / (2 * h);
      const Eigen::Vector3d v = traj.evaluate(t, 1);
      CHECK((fd - v).norm() <= 1e-6 * std::max(1.0, v.norm()));
    }
  }
  SUBCASE("out-of-range time clamps with a flag") {
    bool clamped = false;
    const Eigen::Vector3d p = traj.evaluate(traj.total_time() + 5.0, 0, &clamped);
    CHECK(clamped);
    CHECK((p - traj.end_state().col(0)).norm() < 1e-9);
  }
}

TEST_CASE("gradient propagation against finite differences") {
  std::mt19937_64 rng(11);

  SUBCASE("J = |C|^2 with K = 1 (no waypoints)") {
    const auto traj = random_trajectory(rng, 1);
    Eigen::MatrixX3d dj_dc = 2.0 * traj.coefficients();
    Eigen::VectorXd dj_dt = Eigen::VectorXd::Zero(1);
    Eigen::Matrix3Xd dq;
    Eigen::VectorXd dt;
    traj.propagate_gradient(dj_dc, dj_dt, dq, dt);
    CHECK(dq.cols() == 0);

    auto j_of_t = [&](double t) {
      const auto tt = MincoTrajectory::construct(
          Eigen::Matrix3Xd(3, 0), Eigen::VectorXd::Constant(1, t),
          traj.start_state(), traj.end_state(), 3);
      return tt.coefficients().squaredNorm();
    };
    const double t0 = traj.times()(0);
    const double h = 1e-6 * std::max(1.0, t0);
    const double fd = (j_of_t(t0 + h) - j_of_t(t0 - h)) / (2 * h);
    CHECK(std::abs(dt(0) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }

  SUBCASE("J independent of C returns the direct time gradient") {
    const auto traj = random_trajectory(rng, 4);
    Eigen::MatrixX3d dj_dc = Eigen::MatrixX3d::Zero(24, 3);
    Eigen::VectorXd dj_dt(4);
    dj_dt << 0.3, -0.7, 1.1, 0.0;
    Eigen::Matrix3Xd dq;
    Eigen::VectorXd dt;
    traj.propagate_gradient(dj_dc, dj_dt, dq, dt);
    CHECK((dt - dj_dt).norm() < 1e-12);
    CHECK(dq.norm() < 1e-12);
  }

  SUBCASE("random quadratic over C, K = 4") {
    const int k = 4;
    const auto traj = random_trajectory(rng, k, 0.3, 3.0);
    Eigen::MatrixX3d w = Eigen::MatrixX3d::Random(6 * k, 3);

    auto cost_of = [&](const Eigen::Matrix3Xd& q, const Eigen::VectorXd& t) {
      const auto tt = MincoTrajectory::construct(q, t, traj.start_state(),
                                                 traj.end_state(), 3);
      return 0.5 * tt.coefficients().cwiseProduct(w).cwiseProduct(
                      tt.coefficients()).sum();
    };

    Eigen::MatrixX3d dj_dc =
        traj.coefficients().cwiseProduct(w);
    Eigen::Matrix3Xd dq;
    Eigen::VectorXd dt;
    traj.propagate_gradient(dj_dc, Eigen::VectorXd::Zero(k), dq, dt);

    const double base = cost_of(traj.waypoints(), traj.times());
    (void)base;
    for (int i = 0; i < k - 1; ++i) {
      for (int axis = 0; axis < 3; ++axis) {
        Eigen::Matrix3Xd qp = traj.waypoints(), qm = traj.waypoints();
        const double h = 1e-6;
        qp(axis, i) += h;
        qm(axis, i) -= h;
        const double fd = (cost_of(qp, traj.times()) - cost_of(qm, traj.times())) / (2 * h);
        CHECK(std::abs(dq(axis, i) - fd) <=
              1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd tp = traj.times(), tm = traj.times();
      const double h = 1e-7 * std::max(1.0, traj.times()(i));
      tp(i) += h;
      tm(i) -= h;
      const double fd = (cost_of(traj.waypoints(), tp) - cost_of(traj.waypoints(), tm)) / (2 * h);
      CHECK(std::abs(dt(i) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("control energy closed form") {
  SUBCASE("unit min-jerk move has energy 720") {
    const auto traj = MincoTrajectory::construct(
        Eigen::Matrix3Xd(3, 0), Eigen::VectorXd::Constant(1, 1.0),
        state_cols({0.0, 0.0, 0.0}), state_cols({1.0, 0.0, 0.0}), 3);
    CHECK(traj.control_energy() == doctest::Approx(720.0).epsilon(1e-10));
    // Against numeric quadrature of the squared jerk.
    const double quad = oracles::simpson(
        [&](double t) { return traj.evaluate(t, 3).squaredNorm(); }, 0.0, 1.0);
    CHECK(traj.control_energy() == doctest::Approx(quad).epsilon(1e-8));
  }
  SUBCASE("energy matches quadrature on random trajectories") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
      const auto traj = random_trajectory(rng, 3, 0.5, 2.0);
      double quad = 0.0;
      double t0 = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double ti = traj.times()(i);
        quad += oracles::simpson(
            [&](double t) { return traj.evaluate_local(i, t, 3).squaredNorm(); },
            0.0, ti);
        t0 += ti;
      }
      CHECK(traj.control_energy() == doctest::Approx(quad).epsilon(1e-8));
    }
  }
}

TEST_CASE("construct scales linearly in the segment count") {
  std::mt19937_64 rng(17);
  auto time_for = [&](int k) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < 20; ++rep) {
      auto traj = random_trajectory(rng, k, 0.5, 1.5);
      (void)traj;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  time_for(64);  // warm up
  const double t_small = time_for(256);
  const double t_large = time_for(512);
  // Linear scaling doubles; quadratic would quadruple. Allow slack.
  CHECK(t_large / t_small < 3.0);
}

TEST_SUITE_END();
