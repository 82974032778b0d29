#include "gfm/mem/metric_map.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace gfm::mem {

MetricEncodingMap::MetricEncodingMap(int width, int height, double resolution,
                                     const Eigen::Vector2d& origin,
                                     std::vector<uint64_t> codes,
                                     const MemMeta& meta)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      codes_(std::move(codes)),
      meta_(meta) {
  if (width_ < 1 || height_ < 1 || !(resolution_ > 0.0)) {
    throw std::invalid_argument("invalid MEM geometry");
  }
  if (codes_.size() != static_cast<std::size_t>(width_) * height_) {
    throw std::invalid_argument("MEM code buffer size mismatch");
  }
  if (meta_.angle_count != kAngleCount) {
    throw std::invalid_argument("MEM angle count must be 64");
  }
}

MetricEncodingMap build_mem(const world::OccupancyGrid& grid,
                            const MemBuildConfig& config) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<uint64_t> codes(static_cast<std::size_t>(w) * h, ~uint64_t{0});

  const double angle_step = kTwoPi / kAngleCount;

  auto encode_free_cell = [&](const world::CellIndex& c) {
    const PoseSE2 pose(grid.cell_center(c).x(), grid.cell_center(c).y(), 0.0);
    uint64_t code = 0;
    for (int i = 1; i <= kAngleCount; ++i) {
      const double angle = angle_step * (i - 1);
      const scan::RayClass cls =
          scan::classify_ray(grid, pose, angle, config.max_range, config.rank);
      if (cls != scan::RayClass::kRank2) {
        code |= uint64_t{1} << (i - 1);  // Rank1 and Miss both set the bit
      }
    }
    return code;
  };

  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, h));

  std::atomic<int> next_row{0};
  auto worker = [&]() {
    for (int y = next_row.fetch_add(1); y < h; y = next_row.fetch_add(1)) {
      for (int x = 0; x < w; ++x) {
        const world::CellIndex c{x, y};
        if (!grid.occupied(c)) {
          codes[grid.index_of(c)] = encode_free_cell(c);
        }
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  MemMeta meta;
  meta.angle_count = kAngleCount;
  meta.max_range = config.max_range;
  meta.tau_rank = config.rank.tau_rank;
  meta.fd_step_xy = config.rank.fd_step_xy;
  meta.fd_step_theta = config.rank.fd_step_theta;
  meta.source_map_hash = grid.content_hash();
  return MetricEncodingMap(w, h, grid.resolution(), grid.origin(),
                           std::move(codes), meta);
}

namespace {

// Wraps an integer angle index onto 1..kAngleCount.
inline int wrap_index(int n) {
  n = (n - 1) % kAngleCount;
  if (n < 0) n += kAngleCount;
  return n + 1;
}

}  // namespace

GfmSample gfm_continuous(const MetricEncodingMap& mem, const PoseSE2& pose,
                         double fov) {
  GfmSample out;

  const double res = mem.resolution();
  const Eigen::Vector2d local = pose.position() - mem.origin();
  if (local.x() < 0.0 || local.x() >= mem.width() * res || local.y() < 0.0 ||
      local.y() >= mem.height() * res) {
    out.value = kAngleCount;
    return out;
  }

  // Bilinear cell weights on the cell-center lattice.
  const double u_raw = local.x() / res - 0.5;
  const double t_raw = local.y() / res - 0.5;
  const double u = std::clamp(u_raw, 0.0, static_cast<double>(mem.width() - 1));
  const double t = std::clamp(t_raw, 0.0, static_cast<double>(mem.height() - 1));
  const bool u_clamped = u != u_raw;
  const bool t_clamped = t != t_raw;
  const int x0 = std::clamp(static_cast<int>(u), 0, std::max(0, mem.width() - 2));
  const int y0 = std::clamp(static_cast<int>(t), 0, std::max(0, mem.height() - 2));
  const int x1 = std::min(x0 + 1, mem.width() - 1);
  const int y1 = std::min(y0 + 1, mem.height() - 1);
  const double wx = u - x0;
  const double wy = t - y0;

  const uint64_t q[2][2] = {
      {mem.code_at({x0, y0}), mem.code_at({x1, y0})},
      {mem.code_at({x0, y1}), mem.code_at({x1, y1})},
  };

  // Fractional window endpoints; both shift with yaw.
  const double index_per_rad = kAngleCount / kTwoPi;
  const double i_star = 1.0 + (pose.theta - 0.5 * fov) * index_per_rad;
  const double j_star = 1.0 + (pose.theta + 0.5 * fov) * index_per_rad;
  const double i_floor = std::floor(i_star);
  const double j_floor = std::floor(j_star);
  const double wi = i_star - i_floor;
  const double wj = j_star - j_floor;
  const int i_lo = wrap_index(static_cast<int>(i_floor));
  const int i_hi = wrap_index(static_cast<int>(i_floor) + 1);
  const int j_lo = wrap_index(static_cast<int>(j_floor));
  const int j_hi = wrap_index(static_cast<int>(j_floor) + 1);

  const double cell_w[2][2] = {
      {(1.0 - wx) * (1.0 - wy), wx * (1.0 - wy)},
      {(1.0 - wx) * wy, wx * wy},
  };
  const int win_i[2] = {i_lo, i_hi};
  const int win_j[2] = {j_lo, j_hi};
  const double win_wi[2] = {1.0 - wi, wi};
  const double win_wj[2] = {1.0 - wj, wj};

  double value = 0.0;
  double d_dwx = 0.0, d_dwy = 0.0, d_dwi = 0.0, d_dwj = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int bx = 0; bx < 2; ++bx) {
      for (int bi = 0; bi < 2; ++bi) {
        for (int bj = 0; bj < 2; ++bj) {
          const double m = gfm_discrete(q[a][bx], win_i[bi], win_j[bj]);
          value += cell_w[a][bx] * win_wi[bi] * win_wj[bj] * m;
          const double ww = win_wi[bi] * win_wj[bj];
          // d(cell_w)/dwx and /dwy carry the sign pattern of the corner.
          d_dwx += (bx == 1 ? 1.0 : -1.0) * (a == 1 ? wy : 1.0 - wy) * ww * m;
          d_dwy += (a == 1 ? 1.0 : -1.0) * (bx == 1 ? wx : 1.0 - wx) * ww * m;
          d_dwi += cell_w[a][bx] * (bi == 1 ? 1.0 : -1.0) * win_wj[bj] * m;
          d_dwj += cell_w[a][bx] * win_wi[bi] * (bj == 1 ? 1.0 : -1.0) * m;
        }
      }
    }
  }

  out.value = value;
  out.gradient.x() = u_clamped ? 0.0 : d_dwx / res;
  out.gradient.y() = t_clamped ? 0.0 : d_dwy / res;
  out.gradient.z() = (d_dwi + d_dwj) * index_per_rad;
  return out;
}

}  // namespace gfm::mem
