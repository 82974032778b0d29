#include "gfm/world/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfm::world {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Row pass of the two-pass exact EDT: lower envelope of the parabolas
// x -> (x - x')^2 + f(x') (Felzenszwalb & Huttenlocher). f must be finite.
void lower_envelope(const std::vector<double>& f, std::vector<double>& d, int n,
                    std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

}  // namespace

DistanceField::DistanceField(const OccupancyGrid& grid)
    : width_(grid.width()),
      height_(grid.height()),
      resolution_(grid.resolution()),
      origin_(grid.origin()),
      has_obstacles_(grid.occupied_count() > 0) {
  const std::size_t n = grid.cell_count();
  distance_.assign(n, kInf);
  grad_x_.assign(n, 0.0);
  grad_y_.assign(n, 0.0);
  if (!has_obstacles_) {
    return;  // callers must check has_obstacles(); distances stay +inf
  }

  // Column pass: vertical cell distance to the nearest occupied cell in the
  // same column, or a sentinel larger than any possible in-map distance.
  const double far = static_cast<double>(width_) + height_ + 2.0;
  std::vector<double> vert(n, far);
  for (int x = 0; x < width_; ++x) {
    double run = far;
    for (int y = 0; y < height_; ++y) {
      run = grid.occupied({x, y}) ? 0.0 : std::min(run + 1.0, far);
      vert[static_cast<std::size_t>(y) * width_ + x] = run;
    }
    run = far;
    for (int y = height_ - 1; y >= 0; --y) {
      run = grid.occupied({x, y}) ? 0.0 : std::min(run + 1.0, far);
      auto& cell = vert[static_cast<std::size_t>(y) * width_ + x];
      cell = std::min(cell, run);
    }
  }

  // Row pass over squared vertical distances gives the exact 2D squared EDT.
  std::vector<double> f(width_), d(width_);
  std::vector<int> v(width_);
  std::vector<double> z(width_ + 1);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const double g = vert[static_cast<std::size_t>(y) * width_ + x];
      f[x] = g * g;
    }
    lower_envelope(f, d, width_, v, z);
    for (int x = 0; x < width_; ++x) {
      distance_[static_cast<std::size_t>(y) * width_ + x] =
          std::max(0.0, std::sqrt(d[x]) * resolution_ - 0.5 * resolution_);
    }
  }

  // Central differences, one-sided at the borders.
  auto at = [&](int x, int y) { return distance_[static_cast<std::size_t>(y) * width_ + x]; };
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
      const int xm = std::max(0, x - 1), xp = std::min(width_ - 1, x + 1);
      const int ym = std::max(0, y - 1), yp = std::min(height_ - 1, y + 1);
      grad_x_[i] = (at(xp, y) - at(xm, y)) / ((xp - xm) * resolution_);
      grad_y_[i] = (at(x, yp) - at(x, ym)) / ((yp - ym) * resolution_);
    }
  }
}

FieldSample DistanceField::sample(const Eigen::Vector2d& p) const {
  FieldSample out;
  const double w = width_ * resolution_;
  const double h = height_ * resolution_;
  const Eigen::Vector2d local = p - origin_;
  if (local.x() < 0.0 || local.x() >= w || local.y() < 0.0 || local.y() >= h) {
    out.in_bounds = false;
    out.distance = 0.0;
    Eigen::Vector2d center = origin_ + 0.5 * Eigen::Vector2d(w, h);
    Eigen::Vector2d dir = center - p;
    const double norm = dir.norm();
    out.gradient = norm > 1e-12 ? Eigen::Vector2d(dir / norm) : Eigen::Vector2d(0.0, 0.0);
    return out;
  }

  // Cell-center lattice coordinates, clamped within the outer half-cell ring.
  double u = local.x() / resolution_ - 0.5;
  double t = local.y() / resolution_ - 0.5;
  u = std::clamp(u, 0.0, static_cast<double>(width_ - 1));
  t = std::clamp(t, 0.0, static_cast<double>(height_ - 1));
  const int x0 = std::clamp(static_cast<int>(u), 0, std::max(0, width_ - 2));
  const int y0 = std::clamp(static_cast<int>(t), 0, std::max(0, height_ - 2));
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double wx = u - x0;
  const double wy = t - y0;

  auto at = [&](int x, int y) { return distance_[static_cast<std::size_t>(y) * width_ + x]; };
  const double d00 = at(x0, y0), d10 = at(x1, y0), d01 = at(x0, y1), d11 = at(x1, y1);

  out.distance = (1 - wx) * (1 - wy) * d00 + wx * (1 - wy) * d10 +
                 (1 - wx) * wy * d01 + wx * wy * d11;
  out.gradient.x() = ((d10 - d00) * (1 - wy) + (d11 - d01) * wy) / resolution_;
  out.gradient.y() = ((d01 - d00) * (1 - wx) + (d11 - d10) * wx) / resolution_;
  return out;
}

}  // namespace gfm::world
