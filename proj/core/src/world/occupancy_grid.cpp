#include "gfm/world/occupancy_grid.hpp"

#include <cmath>
#include <cstring>
#include <deque>

namespace gfm::world {

namespace {

// FNV-1a over raw bytes.
uint64_t fnv1a(uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             const Eigen::Vector2d& origin,
                             std::vector<uint8_t> cells)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      cells_(std::move(cells)) {
  if (width_ < 1 || height_ < 1) {
    throw std::invalid_argument("occupancy grid dimensions must be >= 1");
  }
  if (!(resolution_ > 0.0)) {
    throw std::invalid_argument("occupancy grid resolution must be > 0");
  }
  if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw std::invalid_argument("occupancy grid cell buffer size mismatch");
  }
  for (auto& c : cells_) {
    c = c ? 1 : 0;
    occupied_count_ += c;
  }

  uint64_t h = 1469598103934665603ull;
  int32_t dims[2] = {width_, height_};
  h = fnv1a(h, dims, sizeof(dims));
  double geo[3] = {resolution_, origin_.x(), origin_.y()};
  h = fnv1a(h, geo, sizeof(geo));
  h = fnv1a(h, cells_.data(), cells_.size());
  hash_ = h;

  label_components();
}

void OccupancyGrid::label_components() {
  component_.assign(cells_.size(), -1);
  int next = 0;
  std::deque<CellIndex> queue;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      CellIndex seed{x, y};
      if (!occupied(seed) || component_[index_of(seed)] >= 0) {
        continue;
      }
      const int label = next++;
      component_[index_of(seed)] = label;
      queue.push_back(seed);
      while (!queue.empty()) {
        CellIndex c = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            CellIndex n{c.x + dx, c.y + dy};
            if (!in_bounds(n) || !occupied(n)) continue;
            auto& lab = component_[index_of(n)];
            if (lab < 0) {
              lab = label;
              queue.push_back(n);
            }
          }
        }
      }
    }
  }
}

}  // namespace gfm::world
