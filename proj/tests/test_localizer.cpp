#include "gfm/localizer/registration.hpp"
#include "gfm/localizer/tracking.hpp"
#include "gfm/scan/lidar.hpp"
#include "gfm/world/synthetic.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace gfm;

namespace {

localizer::Registration make_registration(const world::OccupancyGrid& grid,
                                          const world::DistanceField& df,
                                          const PoseSE2& true_pose,
                                          const scan::LidarConfig& lidar,
                                          const PoseSE2& estimate) {
  const scan::Scan s = simulate_scan(grid, true_pose, lidar);
  localizer::Registration reg;
  reg.field = &df;
  reg.body_points = s.body_points();
  reg.estimate = estimate;
  return reg;
}

}  // namespace

TEST_SUITE_BEGIN("localizer");

TEST_CASE("objective and gradient") {
  const auto grid = world::make_corner_room_map(0.1);
  const world::DistanceField df(grid);
  scan::LidarConfig lidar;
  lidar.fov = kTwoPi;
  lidar.n_rays = 90;
  lidar.max_range = 8.0;
  const PoseSE2 truth(3.5, 3.5, 0.3);

  SUBCASE("residuals nearly vanish at the true pose") {
    const auto reg = make_registration(grid, df, truth, lidar, truth);
    const auto eval = objective_and_gradient(reg);
    // Hit points sit on obstacle boundaries where the interpolated field
    // reads about half a cell of residual distance.
    const double per_point_bound = 0.5 * 0.1;
    CHECK(eval.f <= 0.5 * 90 * per_point_bound * per_point_bound);
  }
  SUBCASE("gradient matches finite differences away from creases") {
    const PoseSE2 estimate(3.533, 3.471, 0.317);
    const auto reg = make_registration(grid, df, truth, lidar, estimate);
    const auto eval = objective_and_gradient(reg);
    const double h = 1e-6;
    for (int axis = 0; axis < 3; ++axis) {
      Eigen::Vector3d d = Eigen::Vector3d::Zero();
      d(axis) = h;
      auto at = [&](const Eigen::Vector3d& delta) {
        localizer::Registration r = reg;
        r.estimate = PoseSE2(estimate.x + delta.x(), estimate.y + delta.y(),
                             estimate.theta + delta.z());
        return objective_and_gradient(r).f;
      };
      const double fd = (at(d) - at(-d)) / (2 * h);
      CHECK(std::abs(eval.gradient(axis) - fd) <=
            1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
  SUBCASE("translating map and scan together leaves f invariant") {
    const auto reg = make_registration(grid, df, truth, lidar, truth);
    const double f0 = objective_and_gradient(reg).f;

    world::OccupancyGrid shifted(grid.width(), grid.height(),
                                 grid.resolution(),
                                 grid.origin() + Eigen::Vector2d(2.0, -1.0),
                                 grid.cells());
    const world::DistanceField sdf(shifted);
    const PoseSE2 struth(truth.x + 2.0, truth.y - 1.0, truth.theta);
    const auto sreg = make_registration(shifted, sdf, struth, lidar, struth);
    const double f1 = objective_and_gradient(sreg).f;
    CHECK(f0 == doctest::Approx(f1).epsilon(1e-12));
  }
}

TEST_CASE("hessian analysis captures degeneracy") {
  scan::LidarConfig lidar;
  lidar.fov = kTwoPi;
  lidar.n_rays = 120;
  lidar.max_range = 5.0;

  SUBCASE("corridor: near-null translation along the axis") {
    const auto grid = world::make_corridor_map(0.1);
    const world::DistanceField df(grid);
    const PoseSE2 pose(8.0, 1.4, 0.0);  // mid corridor, axis = x
    const auto reg = make_registration(grid, df, pose, lidar, pose);
    const auto split = localizer::hessian_analysis(reg);

    const double lmin = split.h1_eigenvalues(0);
    const double lmax = split.h1_eigenvalues(2);
    CHECK(lmin / lmax < 1e-3);
    // The null direction is translation along the corridor (x).
    const Eigen::Vector3d null_dir = split.h1_eigenvectors.col(0);
    const double angle =
        std::acos(std::min(1.0, std::abs(null_dir.head<2>().normalized().x())));
    CHECK(angle < 5.0 * kPi / 180.0);
    CHECK(std::abs(null_dir.z()) < 0.2);
  }
  SUBCASE("corner room: bounded conditioning") {
    const auto grid = world::make_corner_room_map(0.1);
    const world::DistanceField df(grid);
    const PoseSE2 pose(3.5, 3.5, 0.0);
    const auto reg = make_registration(grid, df, pose, lidar, pose);
    const auto split = localizer::hessian_analysis(reg);
    CHECK(split.h1_eigenvalues(0) / split.h1_eigenvalues(2) > 1e-2);
  }
  SUBCASE("H1 is positive semi-definite for random scans") {
    const auto grid = world::make_corner_room_map(0.1);
    const world::DistanceField df(grid);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> up(0.8, 6.2);
    std::uniform_real_distribution<double> ut(-kPi, kPi);
    for (int t = 0; t < 30; ++t) {
      const PoseSE2 pose(up(rng), up(rng), ut(rng));
      if (grid.occupied(grid.world_to_cell(pose.position()))) continue;
      const auto reg = make_registration(grid, df, pose, lidar, pose);
      const auto split = localizer::hessian_analysis(reg);
      CHECK(split.h1_eigenvalues(0) >= -1e-10);
    }
  }
}

TEST_CASE("sum-of-outer-products lemmas") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);

  SUBCASE("random vector sets build PSD matrices") {
    for (int trial = 0; trial < 1000; ++trial) {
      const int count = 1 + static_cast<int>(rng() % 12);
      Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
      for (int i = 0; i < count; ++i) {
        const Eigen::Vector3d v(n(rng), n(rng), n(rng));
        a += v * v.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
      CHECK(eig.eigenvalues()(0) >= -1e-10);
    }
  }
  SUBCASE("rank-deficient sums annihilate every generator") {
    for (int trial = 0; trial < 1000; ++trial) {
      Eigen::Vector3d xi(n(rng), n(rng), n(rng));
      while (xi.norm() < 1e-3) xi = Eigen::Vector3d(n(rng), n(rng), n(rng));
      xi.normalize();
      std::vector<Eigen::Vector3d> gens;
      Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 8; ++i) {
        Eigen::Vector3d v(n(rng), n(rng), n(rng));
        v -= v.dot(xi) * xi;  // orthogonal to xi by construction
        gens.push_back(v);
        a += v * v.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
      const Eigen::Vector3d null_dir = eig.eigenvectors().col(0);
      CHECK(eig.eigenvalues()(0) < 1e-12 * std::max(1.0, eig.eigenvalues()(2)));
      for (const auto& v : gens) {
        CHECK(std::abs(v.dot(null_dir)) <= 1e-8 * std::max(1.0, v.norm()));
      }
    }
  }
}

TEST_CASE("gauss-newton localization") {
  scan::LidarConfig lidar;
  lidar.fov = kTwoPi;
  lidar.n_rays = 120;
  lidar.max_range = 6.0;

  SUBCASE("zero perturbation converges immediately and accurately") {
    const auto grid = world::make_corner_room_map(0.1);
    const world::DistanceField df(grid);
    const PoseSE2 truth(3.5, 3.5, 0.2);
    const auto reg = make_registration(grid, df, truth, lidar, truth);
    const auto r = gauss_newton_localize(reg);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK((r.pose.position() - truth.position()).norm() <= 0.01);
  }
  SUBCASE("feature-rich pose recovers a moderate perturbation") {
    const auto grid = world::make_corner_room_map(0.1);
    const world::DistanceField df(grid);
    const PoseSE2 truth(2.5, 4.1, 0.7);
    const PoseSE2 guess(truth.x + 0.05, truth.y - 0.03, truth.theta + 0.02);
    const auto reg = make_registration(grid, df, truth, lidar, guess);
    const auto r = gauss_newton_localize(reg);
    CHECK(r.converged);
    // Recovery is limited by the half-cell trough of the discretized
    // distance field (~res/8 of residual bias at this pose).
    CHECK((r.pose.position() - truth.position()).norm() <= 0.012);
  }
  SUBCASE("corridor pose cannot recover along-axis error") {
    const auto grid = world::make_corridor_map(0.1);
    const world::DistanceField df(grid);
    const PoseSE2 truth(8.0, 1.4, 0.0);
    const double push = 0.08;  // along the corridor axis
    const PoseSE2 guess(truth.x + push, truth.y, truth.theta);
    const auto reg = make_registration(grid, df, truth, lidar, guess);
    const auto r = gauss_newton_localize(reg);
    const double residual_x = std::abs(r.pose.x - truth.x);
    CHECK(residual_x >= 0.5 * push);
  }
}

TEST_CASE("trajectory tracking harness") {
  const auto grid = world::make_corner_room_map(0.1);
  const world::DistanceField df(grid);

  // A gentle two-segment trajectory across the room.
  Eigen::Matrix3Xd q(3, 1);
  q << 3.5, 3.0, 0.2;
  Eigen::VectorXd t(2);
  t << 4.0, 4.0;
  Eigen::Matrix3Xd s0 = Eigen::Matrix3Xd::Zero(3, 3);
  Eigen::Matrix3Xd s1 = Eigen::Matrix3Xd::Zero(3, 3);
  s0.col(0) = Eigen::Vector3d(1.5, 1.5, 0.0);
  s1.col(0) = Eigen::Vector3d(5.5, 4.5, 0.5);
  const auto traj = minco::MincoTrajectory::construct(q, t, s0, s1, 3);

  localizer::TrackConfig cfg;
  cfg.lidar.fov = kTwoPi;
  cfg.lidar.n_rays = 90;
  cfg.lidar.max_range = 6.0;

  SUBCASE("noiseless tracking stays within the discretization bound") {
    localizer::NoiseModel noise;
    noise.range_sigma = 0.0;
    noise.drift_sigma_xy = 0.0;
    noise.drift_sigma_theta = 0.0;
    const auto report = track_trajectory(traj, grid, df, noise, cfg);
    CHECK(report.convergence_failures == 0);
    CHECK(report.mean_error <= 0.05);
  }
  SUBCASE("fixed seed reproduces the report exactly") {
    localizer::NoiseModel noise;
    noise.seed = 77;
    const auto a = track_trajectory(traj, grid, df, noise, cfg);
    const auto b = track_trajectory(traj, grid, df, noise, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(a.mean_error == b.mean_error);
    CHECK(a.goal_deviation == b.goal_deviation);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].error == b.samples[i].error);
    }
  }
}

TEST_SUITE_END();
