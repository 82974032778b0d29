#include "gfm/search/heuristic_field.hpp"
#include "gfm/search/hybrid_astar.hpp"
#include "gfm/search/keyposes.hpp"
#include "gfm/search/sigmoid.hpp"

#include "gfm/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace gfm;

namespace {

world::OccupancyGrid bordered_grid(int w, int h, double res) {
  std::vector<uint8_t> cells(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
        cells[static_cast<std::size_t>(y) * w + x] = 1;
      }
    }
  }
  return world::OccupancyGrid(w, h, res, {0.0, 0.0}, std::move(cells));
}

mem::MetricEncodingMap uniform_mem(const world::OccupancyGrid& grid,
                                   int bits) {
  uint64_t code = 0;
  for (int b = 0; b < bits; ++b) code |= uint64_t{1} << b;
  std::vector<uint64_t> codes(grid.cell_count(), code);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.occupied({x, y})) {
        codes[grid.index_of({x, y})] = ~uint64_t{0};
      }
    }
  }
  mem::MemMeta meta;
  return mem::MetricEncodingMap(grid.width(), grid.height(), grid.resolution(),
                                grid.origin(), std::move(codes), meta);
}

}  // namespace

TEST_SUITE_BEGIN("search");

TEST_CASE("sigmoid") {
  const search::SigmoidParams p{1.0, 64};
  SUBCASE("midpoint maps to one half") {
    CHECK(search::sigmoid(32.0, p) == doctest::Approx(0.5));
  }
  SUBCASE("zero metric with unit epsilon") {
    CHECK(search::sigmoid(0.0, p) == doctest::Approx(0.268941).epsilon(1e-5));
  }
  SUBCASE("strictly increasing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 64.0);
    for (int t = 0; t < 300; ++t) {
      double a = u(rng), b = u(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(search::sigmoid(a, p) < search::sigmoid(b, p));
    }
  }
  SUBCASE("epsilon zero gives the constant half") {
    const search::SigmoidParams flat{0.0, 64};
    CHECK(search::sigmoid(0.0, flat) == doctest::Approx(0.5));
    CHECK(search::sigmoid(64.0, flat) == doctest::Approx(0.5));
  }
}

TEST_CASE("sigmoid_derivative") {
  const search::SigmoidParams p{1.0, 64};
  SUBCASE("midpoint value") {
    CHECK(search::sigmoid_derivative(32.0, p) == doctest::Approx(0.0078125));
  }
  SUBCASE("always positive") {
    for (double m = 0.0; m <= 64.0; m += 1.7) {
      CHECK(search::sigmoid_derivative(m, p) > 0.0);
    }
  }
  SUBCASE("matches finite differences of the sigmoid") {
    for (const double m : {10.0, 32.0, 50.0}) {
      const double h = 1e-5;
      const double fd =
          (search::sigmoid(m + h, p) - search::sigmoid(m - h, p)) / (2 * h);
      CHECK(std::abs(search::sigmoid_derivative(m, p) - fd) <= 1e-8);
    }
  }
}

TEST_CASE("heuristic_presearch") {
  SUBCASE("uniform metric: h equals sigma times the hop count") {
    // Open 12x12 grid (no border) with uniform 20-bit codes.
    world::OccupancyGrid grid(12, 12, 0.5, {0.0, 0.0},
                              std::vector<uint8_t>(144, 0));
    const auto m = uniform_mem(grid, 20);
    const search::SigmoidParams p{1.0, 64};
    const PoseSE2 goal(2.25, 2.25, 0.0);  // cell (4,4)
    const auto h = heuristic_presearch(m, grid, goal, p);
    const double sigma = search::sigmoid(20.0, p);
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 12; ++x) {
        const int hops = std::max(std::abs(x - 4), std::abs(y - 4));
        REQUIRE(h.at({x, y}) == doctest::Approx(sigma * hops).epsilon(1e-12));
      }
    }
    CHECK(h.at(h.goal_cell()) == doctest::Approx(0.0));
  }
  SUBCASE("unreachable pocket stays infinite") {
    // A sealed 1-cell pocket in the corner.
    auto grid = [&] {
      std::vector<uint8_t> cells(64, 0);
      cells[0 * 8 + 1] = 1;  // (1,0)
      cells[1 * 8 + 0] = 1;  // (0,1)
      cells[1 * 8 + 1] = 1;  // (1,1)
      return world::OccupancyGrid(8, 8, 1.0, {0.0, 0.0}, std::move(cells));
    }();
    const auto m = uniform_mem(grid, 10);
    const auto h = heuristic_presearch(m, grid, PoseSE2(5.5, 5.5, 0.0),
                                       search::SigmoidParams{1.0, 64});
    CHECK(std::isinf(h.at({0, 0})));
    CHECK(std::isfinite(h.at({2, 2})));
  }
  SUBCASE("goal inside an obstacle is an error") {
    const auto grid = bordered_grid(8, 8, 1.0);
    const auto m = uniform_mem(grid, 10);
    CHECK_THROWS_AS(heuristic_presearch(m, grid, PoseSE2(0.5, 0.5, 0.0),
                                        search::SigmoidParams{1.0, 64}),
                    ConfigError);
  }
}

TEST_CASE("hybrid A*") {
  const auto grid = bordered_grid(80, 60, 0.1);  // 8 x 6 m room
  const world::DistanceField df(grid);
  const auto m = uniform_mem(grid, 24);
  const search::SigmoidParams sp{1.0, 64};

  search::SearchConfig cfg;
  cfg.step_length = 0.2;
  cfg.safety_margin = 0.25;

  SUBCASE("start equals goal") {
    const PoseSE2 p(4.0, 3.0, 0.5);
    const auto h = heuristic_presearch(m, grid, p, sp);
    const auto r = hybrid_astar(df, m, h, p, p, sp, cfg);
    CHECK(r.path.size() == 1);
    CHECK(r.g_cost == doctest::Approx(0.0));
  }
  SUBCASE("uniform metric: near-straight path") {
    // Yaw-invariant uniform field: the all-zero code reads the same metric
    // through any FOV window (a nonzero uniform code would reward pointing
    // the window at its unset angles, which is not a uniform step cost).
    const auto m0 = uniform_mem(grid, 0);
    const PoseSE2 start(1.0, 1.0, std::atan2(3.5, 6.0));
    const PoseSE2 goal(7.0, 4.5, std::atan2(3.5, 6.0));
    const auto h = heuristic_presearch(m0, grid, goal, sp);
    const auto r = hybrid_astar(df, m0, h, start, goal, sp, cfg);
    REQUIRE(r.path.size() >= 2);
    double length = 0.0;
    for (std::size_t i = 1; i < r.path.size(); ++i) {
      length += (r.path[i].position() - r.path[i - 1].position()).norm();
    }
    const double straight = (goal.position() - start.position()).norm();
    CHECK(length <= 1.05 * straight + cfg.goal_xy_tol);
    // Endpoint within tolerances.
    CHECK((r.path.back().position() - goal.position()).norm() <=
          cfg.goal_xy_tol);
    CHECK(std::abs(normalize_angle(r.path.back().theta - goal.theta)) <=
          cfg.goal_yaw_tol);
  }
  SUBCASE("g cost equals the recomputed step costs") {
    const PoseSE2 start(1.0, 1.0, 0.0);
    const PoseSE2 goal(6.5, 4.0, 1.0);
    const auto h = heuristic_presearch(m, grid, goal, sp);
    const auto r = hybrid_astar(df, m, h, start, goal, sp, cfg);
    double g = 0.0;
    for (std::size_t i = 1; i < r.path.size(); ++i) {
      g += search::sigmoid(
          gfm_continuous(m, r.path[i], cfg.fov).value, sp);
    }
    CHECK(std::abs(g - r.g_cost) < 1e-9);
  }
  SUBCASE("safety margin holds along the path") {
    const PoseSE2 start(0.6, 0.6, 0.0);
    const PoseSE2 goal(7.2, 5.2, 0.0);
    const auto h = heuristic_presearch(m, grid, goal, sp);
    const auto r = hybrid_astar(df, m, h, start, goal, sp, cfg);
    for (const auto& p : r.path) {
      CHECK(df.sample(p.position()).distance >= cfg.safety_margin);
    }
  }
  SUBCASE("deterministic across runs") {
    const PoseSE2 start(1.0, 2.0, 0.3);
    const PoseSE2 goal(7.0, 3.0, -0.4);
    const auto h = heuristic_presearch(m, grid, goal, sp);
    const auto a = hybrid_astar(df, m, h, start, goal, sp, cfg);
    const auto b = hybrid_astar(df, m, h, start, goal, sp, cfg);
    REQUIRE(a.path.size() == b.path.size());
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      CHECK(a.path[i].x == b.path[i].x);
      CHECK(a.path[i].y == b.path[i].y);
      CHECK(a.path[i].theta == b.path[i].theta);
    }
  }
  SUBCASE("walled-off goal raises NoPath") {
    // Seal a chamber around the goal.
    auto cells = grid.cells();
    for (int y = 30; y < 45; ++y) {
      for (int x = 55; x < 70; ++x) {
        const bool edge = y == 30 || y == 44 || x == 55 || x == 69;
        if (edge) cells[static_cast<std::size_t>(y) * 80 + x] = 1;
      }
    }
    const world::OccupancyGrid sealed(80, 60, 0.1, {0.0, 0.0}, cells);
    const world::DistanceField sdf(sealed);
    const auto sm = uniform_mem(sealed, 24);
    const PoseSE2 goal(6.2, 3.7, 0.0);
    const auto h = heuristic_presearch(sm, sealed, goal, sp);
    CHECK_THROWS_AS(
        hybrid_astar(sdf, sm, h, PoseSE2(1.0, 1.0, 0.0), goal, sp, cfg),
        NoPathError);
  }
}

TEST_CASE("extract_keyposes") {
  search::KeyposeConfig cfg;
  cfg.rdp_epsilon = 0.1;
  cfg.max_spacing = 10.0;  // no cap in these subcases

  SUBCASE("straight path keeps only the endpoints") {
    search::PosePath path;
    for (int i = 0; i <= 10; ++i) {
      path.emplace_back(0.2 * i, 0.1 * i, 0.0);
    }
    const auto kp = search::extract_keyposes(path, cfg);
    REQUIRE(kp.size() == 2);
    CHECK(kp.front().x() == doctest::Approx(0.0));
    CHECK(kp.back().x() == doctest::Approx(2.0));
  }
  SUBCASE("L-shaped path keeps exactly the bend") {
    search::PosePath path;
    for (int i = 0; i <= 10; ++i) path.emplace_back(0.2 * i, 0.0, 0.0);
    for (int i = 1; i <= 10; ++i) path.emplace_back(2.0, 0.2 * i, kPi / 2);
    const auto kp = search::extract_keyposes(path, cfg);
    REQUIRE(kp.size() == 3);
    CHECK(kp[1].x() == doctest::Approx(2.0));
    CHECK(kp[1].y() == doctest::Approx(0.0));
  }
  SUBCASE("spacing cap inserts intermediate poses") {
    search::KeyposeConfig capped;
    capped.rdp_epsilon = 0.1;
    capped.max_spacing = 0.5;
    search::PosePath path;
    for (int i = 0; i <= 20; ++i) path.emplace_back(0.2 * i, 0.0, 0.0);
    const auto kp = search::extract_keyposes(path, capped);
    REQUIRE(kp.size() >= 3);
    for (std::size_t i = 1; i < kp.size(); ++i) {
      CHECK((kp[i].head<2>() - kp[i - 1].head<2>()).norm() <=
            capped.max_spacing + 0.11);
    }
  }
  SUBCASE("yaw crossing the seam unwraps continuously") {
    search::PosePath path;
    // Yaw sweeps from 3.0 rad through pi to -3.0 rad (continuous rotation).
    for (int i = 0; i <= 8; ++i) {
      path.emplace_back(0.5 * i, 0.01 * i * i, 3.0 + 0.07 * i);
    }
    search::KeyposeConfig c2;
    c2.rdp_epsilon = 0.001;
    c2.max_spacing = 0.6;
    const auto kp = search::extract_keyposes(path, c2);
    for (std::size_t i = 1; i < kp.size(); ++i) {
      CHECK(std::abs(kp[i].z() - kp[i - 1].z()) < kPi);
    }
    CHECK(kp.back().z() > 3.0);  // unwrapped past the seam, not wrapped back
  }
}

TEST_SUITE_END();
